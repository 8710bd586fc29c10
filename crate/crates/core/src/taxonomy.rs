//! The strict-ordinal 2x2 game space: enumeration, the 144-class quotient
//! under row and column relabeling, structural flags, and susceptibility
//! scans for each extortion scheme.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{self, Roles, Scenario, ThreatRequest};
use crate::error::{EngineError, ScanError};
use crate::game::{Game, Profile};
use crate::rational::Rational;

pub const RAW_GAMES: usize = 576;
pub const CANONICAL_GAMES: usize = 144;

const ROW: usize = 0;
const COL: usize = 1;

/// Per-player rank tables over the cells TL, TR, BL, BR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalPayoffs {
    pub row: [u8; 4],
    pub col: [u8; 4],
}

fn cell(r: usize, c: usize) -> usize {
    r * 2 + c
}

/// All 24 orderings of the ranks 1..=4, lexicographic.
fn rank_permutations() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 1..=4u8 {
        for b in 1..=4u8 {
            for c in 1..=4u8 {
                for d in 1..=4u8 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 5];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x as usize], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

impl OrdinalPayoffs {
    /// Decodes `raw_id = 24 * row_permutation + column_permutation`.
    pub fn from_raw_id(raw_id: usize) -> OrdinalPayoffs {
        assert!(raw_id < RAW_GAMES, "raw id {raw_id} out of range");
        let perms = rank_permutations();
        OrdinalPayoffs {
            row: perms[raw_id / 24],
            col: perms[raw_id % 24],
        }
    }

    pub fn raw_id(&self) -> usize {
        let perms = rank_permutations();
        let index = |p: &[u8; 4]| perms.iter().position(|q| q == p).expect("strict ranks");
        index(&self.row) * 24 + index(&self.col)
    }

    pub fn rank(&self, player: usize, r: usize, c: usize) -> u8 {
        if player == ROW {
            self.row[cell(r, c)]
        } else {
            self.col[cell(r, c)]
        }
    }

    /// Payoff matrix read cell by cell, row player's rank first.
    pub fn matrix(&self) -> [u8; 8] {
        let mut out = [0; 8];
        for k in 0..4 {
            out[2 * k] = self.row[k];
            out[2 * k + 1] = self.col[k];
        }
        out
    }

    fn permute(&self, swap_rows: bool, swap_cols: bool) -> OrdinalPayoffs {
        let source = |k: usize| {
            let (r, c) = (k / 2, k % 2);
            cell(r ^ swap_rows as usize, c ^ swap_cols as usize)
        };
        OrdinalPayoffs {
            row: std::array::from_fn(|k| self.row[source(k)]),
            col: std::array::from_fn(|k| self.col[source(k)]),
        }
    }

    /// The images under row swap, column swap and both, starting with the identity.
    pub fn orbit(&self) -> [OrdinalPayoffs; 4] {
        [
            *self,
            self.permute(true, false),
            self.permute(false, true),
            self.permute(true, true),
        ]
    }

    /// Lexicographically smallest matrix in the orbit.
    pub fn canonical(&self) -> OrdinalPayoffs {
        self.orbit()
            .into_iter()
            .min_by_key(|p| p.matrix())
            .expect("non-empty orbit")
    }

    pub fn to_game(&self) -> Game {
        let value = |player: usize, r: usize, c: usize| Rational::integer(self.rank(player, r, c) as i64);
        let cells = (0..2)
            .map(|r| (0..2).map(|c| (value(ROW, r, c), value(COL, r, c))).collect())
            .collect();
        Game::bimatrix(["Row", "Column"], &["T", "B"], &["L", "R"], cells).expect("complete 2x2 table")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    pub dominant: [Option<usize>; 2],
    pub ne_count: usize,
    pub equilibrium: Option<Profile>,
    /// Player's equilibrium payoff is rank 4 (unique equilibrium only).
    pub best_at_ne: [bool; 2],
    /// The cell diagonally opposite the equilibrium holds the player's rank 1.
    pub worst_opposite_ne: [bool; 2],
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Susceptibility {
    pub two_player: [bool; 2],
    pub one_player: [bool; 2],
    /// One-player extortion by the co-player is feasible and worthwhile at rank payoffs.
    pub internal: [bool; 2],
    /// One-player susceptible and the co-player, as extortioner, ends below
    /// their base payoff if the threat is declined.
    pub extortioner_risk: [bool; 2],
}

#[derive(Debug, Clone)]
pub struct OrdinalGameRecord {
    pub raw_id: usize,
    pub payoffs: OrdinalPayoffs,
    pub game: Game,
    pub canonical_id: usize,
    pub flags: StructureFlags,
    pub susceptibility: Susceptibility,
}

/// Structural flags of a strict-ordinal game.
pub fn classify(payoffs: &OrdinalPayoffs) -> StructureFlags {
    let game = payoffs.to_game();
    let dominant = [ROW, COL].map(|p| game.dominant_strategy(p).expect("valid player"));
    let equilibria = game.pure_nash_equilibria();
    let equilibrium = (equilibria.len() == 1).then(|| equilibria[0].clone());
    let mut best_at_ne = [false; 2];
    let mut worst_opposite_ne = [false; 2];
    if let Some(eq) = &equilibrium {
        let (r, c) = (eq.strategy(ROW), eq.strategy(COL));
        for player in [ROW, COL] {
            best_at_ne[player] = payoffs.rank(player, r, c) == 4;
            worst_opposite_ne[player] = payoffs.rank(player, 1 - r, 1 - c) == 1;
        }
    }
    StructureFlags {
        dominant,
        ne_count: equilibria.len(),
        equilibrium,
        best_at_ne,
        worst_opposite_ne,
    }
}

/// Canonical class id of a payoff table, numbered by first appearance over raw ids.
pub fn canonicalize(payoffs: &OrdinalPayoffs) -> usize {
    canonical_index()[&payoffs.canonical()]
}

fn canonical_index() -> HashMap<OrdinalPayoffs, usize> {
    let mut index = HashMap::new();
    for raw_id in 0..RAW_GAMES {
        let canonical = OrdinalPayoffs::from_raw_id(raw_id).canonical();
        let next = index.len();
        index.entry(canonical).or_insert(next);
    }
    index
}

fn recipient_targets(game: &Game, eq: &Profile, recipient: usize) -> Vec<usize> {
    (0..game.num_strategies(recipient))
        .filter(|&s| s != eq.strategy(recipient))
        .collect()
}

/// Some target lets a payment to the co-player strictly hurt `player`.
pub fn two_player_susceptible(game: &Game, player: usize) -> Result<bool, EngineError> {
    let Some(eq) = game.unique_pure_nash() else {
        return Ok(false);
    };
    let recipient = 1 - player;
    for target in recipient_targets(game, &eq, recipient) {
        if engine::is_susceptible(game, player, recipient, target)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Some target admits a valid (fee, payment) pair for `player` in `scenario`.
pub fn one_player_feasible(game: &Game, player: usize, scenario: Scenario) -> Result<bool, EngineError> {
    let Some(eq) = game.unique_pure_nash() else {
        return Ok(false);
    };
    let roles = Roles::for_scenario(scenario, player);
    for target in recipient_targets(game, &eq, player) {
        let mut request = ThreatRequest::bounds(roles);
        request.target = Some(target);
        if engine::analyze(game, &request)?.feasible {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Extorted player dominant, co-player not, and the extorted player's best
/// equilibrium outcome sits diagonally opposite their worst.
pub fn one_player_structural(flags: &StructureFlags, player: usize) -> bool {
    flags.dominant[player].is_some()
        && flags.dominant[1 - player].is_none()
        && flags.best_at_ne[player]
        && flags.worst_opposite_ne[player]
}

fn extortioner_risk(game: &Game, player: usize) -> Result<bool, EngineError> {
    let eq = game.unique_pure_nash().expect("susceptible games have a unique equilibrium");
    let extortioner = 1 - player;
    for target in recipient_targets(game, &eq, player) {
        if let Some(shifted) = engine::decline_equilibrium_target(game, player, target)? {
            let base = game.payoff(&eq, extortioner)?;
            let declined = game.payoff(&shifted, extortioner)?;
            if declined < base {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn evaluate(raw_id: usize, game: &Game, flags: &StructureFlags) -> Result<Susceptibility, ScanError> {
    let wrap = |source| ScanError::Engine { raw_id, source };
    let mut out = Susceptibility::default();
    for player in [ROW, COL] {
        out.two_player[player] = two_player_susceptible(game, player).map_err(wrap)?;
        let engine_verdict =
            one_player_feasible(game, player, Scenario::OnePlayerExternal).map_err(wrap)?;
        let structural = one_player_structural(flags, player);
        if engine_verdict != structural {
            return Err(ScanError::Disagreement {
                raw_id,
                player,
                structural,
                engine: engine_verdict,
            });
        }
        out.one_player[player] = engine_verdict;
        if engine_verdict {
            out.internal[player] =
                one_player_feasible(game, player, Scenario::OnePlayerInternal).map_err(wrap)?;
            out.extortioner_risk[player] = extortioner_risk(game, player).map_err(wrap)?;
        }
    }
    Ok(out)
}

/// All 576 strict-ordinal 2x2 games ordered by raw id, fully classified.
pub fn enumerate_ordinal_games() -> Result<Vec<OrdinalGameRecord>, ScanError> {
    let index = canonical_index();
    (0..RAW_GAMES)
        .map(|raw_id| {
            let payoffs = OrdinalPayoffs::from_raw_id(raw_id);
            let game = payoffs.to_game();
            let flags = classify(&payoffs);
            let susceptibility = evaluate(raw_id, &game, &flags)?;
            Ok(OrdinalGameRecord {
                raw_id,
                canonical_id: index[&payoffs.canonical()],
                payoffs,
                game,
                flags,
                susceptibility,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    TwoPlayer,
    OnePlayer,
    Internal,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::TwoPlayer => "two-player",
            Scheme::OnePlayer => "one-player",
            Scheme::Internal => "internal",
        }
    }

    fn flags(self, s: &Susceptibility) -> [bool; 2] {
        match self {
            Scheme::TwoPlayer => s.two_player,
            Scheme::OnePlayer => s.one_player,
            Scheme::Internal => s.internal,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Scheme::TwoPlayer, Scheme::OnePlayer, Scheme::Internal]
            .into_iter()
            .find(|scheme| scheme.label() == s)
            .ok_or_else(|| format!("unknown scheme `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub row_only: usize,
    pub column_only: usize,
    pub both: usize,
}

impl Breakdown {
    pub fn total(&self) -> usize {
        self.row_only + self.column_only + self.both
    }

    fn add(&mut self, flags: [bool; 2]) {
        match flags {
            [true, true] => self.both += 1,
            [true, false] => self.row_only += 1,
            [false, true] => self.column_only += 1,
            [false, false] => {}
        }
    }
}

/// A count over both the raw population and the canonical classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub raw: usize,
    pub canonical: usize,
}

impl Tally {
    pub fn raw_fraction(&self) -> Rational {
        Rational::new(self.raw as i64, RAW_GAMES as i64).expect("nonzero")
    }

    pub fn canonical_fraction(&self) -> Rational {
        Rational::new(self.canonical as i64, CANONICAL_GAMES as i64).expect("nonzero")
    }

    /// `56.25% (324/576, 81/144)`
    pub fn headline(&self) -> String {
        let percent = self.raw_fraction() * Rational::integer(100);
        format!(
            "{}% ({}/{RAW_GAMES}, {}/{CANONICAL_GAMES})",
            percent.to_decimal_string(2),
            self.raw,
            self.canonical
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub scheme: Scheme,
    pub total_raw: usize,
    pub total_canonical: usize,
    pub excluded: Tally,
    pub susceptible: Tally,
    pub raw_breakdown: Breakdown,
    pub canonical_breakdown: Breakdown,
}

impl ScanSummary {
    pub fn analyzable_raw(&self) -> usize {
        self.total_raw - self.excluded.raw
    }
}

fn summarize(records: &[OrdinalGameRecord], scheme: Scheme) -> ScanSummary {
    let mut raw_breakdown = Breakdown::default();
    let mut canonical_breakdown = Breakdown::default();
    let mut excluded = Tally { raw: 0, canonical: 0 };
    let mut seen = [false; CANONICAL_GAMES];
    for record in records {
        let flags = scheme.flags(&record.susceptibility);
        let excluded_here = record.flags.ne_count != 1;
        raw_breakdown.add(flags);
        excluded.raw += excluded_here as usize;
        if !std::mem::replace(&mut seen[record.canonical_id], true) {
            canonical_breakdown.add(flags);
            excluded.canonical += excluded_here as usize;
        }
    }
    ScanSummary {
        scheme,
        total_raw: records.len(),
        total_canonical: seen.iter().filter(|&&s| s).count(),
        excluded,
        susceptible: Tally {
            raw: raw_breakdown.total(),
            canonical: canonical_breakdown.total(),
        },
        raw_breakdown,
        canonical_breakdown,
    }
}

pub fn scan_two_player(records: &[OrdinalGameRecord]) -> ScanSummary {
    summarize(records, Scheme::TwoPlayer)
}

pub fn scan_one_player(records: &[OrdinalGameRecord]) -> ScanSummary {
    summarize(records, Scheme::OnePlayer)
}

pub fn scan_one_player_internal(records: &[OrdinalGameRecord]) -> ScanSummary {
    summarize(records, Scheme::Internal)
}

pub fn scan(records: &[OrdinalGameRecord], scheme: Scheme) -> ScanSummary {
    summarize(records, scheme)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFormat {
    Csv,
    Svg,
}

/// One record per canonical class: the member whose table is the canonical form.
pub fn representatives(records: &[OrdinalGameRecord]) -> Vec<&OrdinalGameRecord> {
    let mut reps: Vec<&OrdinalGameRecord> = records
        .iter()
        .filter(|r| r.payoffs == r.payoffs.canonical())
        .collect();
    reps.sort_by_key(|r| r.canonical_id);
    reps
}

pub const CSV_HEADER: [&str; 20] = [
    "canonical_id",
    "r_tl",
    "c_tl",
    "r_tr",
    "c_tr",
    "r_bl",
    "c_bl",
    "r_br",
    "c_br",
    "dominant_row",
    "dominant_col",
    "ne_count",
    "row_best_at_ne",
    "col_best_at_ne",
    "two_player_row",
    "two_player_col",
    "one_player_row",
    "one_player_col",
    "internal_row",
    "internal_col",
];

pub fn export_chart(
    summary: &ScanSummary,
    records: &[OrdinalGameRecord],
    format: ChartFormat,
) -> Result<String, ScanError> {
    match format {
        ChartFormat::Csv => export_csv(records),
        ChartFormat::Svg => Ok(export_svg(summary.scheme, records)),
    }
}

fn export_csv(records: &[OrdinalGameRecord]) -> Result<String, ScanError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for record in representatives(records) {
        let dominant = |player: usize| {
            record.flags.dominant[player]
                .map(|s| record.game.strategy_name(player, s).to_string())
                .unwrap_or_default()
        };
        let s = &record.susceptibility;
        let mut fields = vec![record.canonical_id.to_string()];
        fields.extend(record.payoffs.matrix().iter().map(u8::to_string));
        fields.push(dominant(ROW));
        fields.push(dominant(COL));
        fields.push(record.flags.ne_count.to_string());
        for flag in [
            record.flags.best_at_ne[ROW],
            record.flags.best_at_ne[COL],
            s.two_player[ROW],
            s.two_player[COL],
            s.one_player[ROW],
            s.one_player[COL],
            s.internal[ROW],
            s.internal[COL],
        ] {
            fields.push(flag.to_string());
        }
        writer.write_record(&fields)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| ScanError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn border_color(flags: [bool; 2]) -> Option<&'static str> {
    match flags {
        [true, true] => Some("black"),
        [true, false] => Some("red"),
        [false, true] => Some("blue"),
        [false, false] => None,
    }
}

const TILE: usize = 48;
const MARGIN: usize = 24;

fn export_svg(scheme: Scheme, records: &[OrdinalGameRecord]) -> String {
    let side = 12 * TILE + 2 * MARGIN;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{}\" font-family=\"monospace\">\n",
        side + MARGIN
    );
    out.push_str(&format!(
        "  <title>2x2 strict-ordinal games susceptible to {scheme} extortion</title>\n"
    ));
    for record in representatives(records) {
        let id = record.canonical_id;
        let x = MARGIN + (id % 12) * TILE;
        let y = MARGIN + (id / 12) * TILE;
        let fill = if record.flags.ne_count == 1 { "white" } else { "#e0e0e0" };
        let (stroke, width) = match border_color(scheme.flags(&record.susceptibility)) {
            Some(color) => (color, 4),
            None => ("#b0b0b0", 1),
        };
        out.push_str(&format!(
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n",
            x + 3,
            y + 3,
            TILE - 6,
            TILE - 6
        ));
        let m = record.payoffs.matrix();
        for (line, r) in [(0usize, 0usize), (1, 1)] {
            let k = 4 * r;
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-size=\"9\">{}{} {}{}</text>\n",
                x + 8,
                y + 20 + 12 * line,
                m[k],
                m[k + 1],
                m[k + 2],
                m[k + 3]
            ));
        }
    }
    let legend_y = side + MARGIN / 2;
    out.push_str(&format!(
        "  <text x=\"{MARGIN}\" y=\"{legend_y}\" font-size=\"11\"><tspan fill=\"red\">red: row</tspan>  <tspan fill=\"blue\">blue: column</tspan>  <tspan>black: both</tspan></text>\n"
    ));
    out.push_str("</svg>\n");
    out
}
