//! JSON documents for games, threats and analysis reports.
//!
//! Payoffs, fees and payments are integers or exact `"p/q"` strings. Numbers
//! with a fractional part or exponent are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::engine::{
    Bound, Decision, Diagnostic, ExtortionReport, Roles, Scenario, SubgamePayoffs, ThreatRequest,
};
use crate::error::{FormatError, ParseRationalError};
use crate::game::{make_game, Game, Profile};
use crate::rational::Rational;

fn value_to_rational(value: &Value) -> Result<Rational, FormatError> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::integer(i))
            } else if n.is_u64() {
                Ok(n.to_string().parse()?)
            } else {
                Err(ParseRationalError::FloatLiteral(n.to_string()).into())
            }
        }
        Value::String(s) => Ok(s.parse()?),
        other => Err(FormatError::Malformed(format!("expected a payoff, found {other}"))),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    profile: Vec<String>,
    payoffs: Vec<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGameFile {
    players: Vec<String>,
    strategies: Vec<Vec<String>>,
    #[serde(default)]
    payoffs: Option<Value>,
    #[serde(default)]
    entries: Option<Vec<RawEntry>>,
}

fn inconsistent(detail: impl std::fmt::Display) -> FormatError {
    FormatError::Malformed(format!("inconsistent dimensions: {detail}"))
}

fn as_array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    value
        .as_array()
        .ok_or_else(|| FormatError::Malformed(format!("{what} must be an array")))
}

/// Parses a game document from text.
pub fn parse_game_str(text: &str) -> Result<Game, FormatError> {
    let raw: RawGameFile = serde_json::from_str(text)?;
    let mut entries = Vec::new();
    match (&raw.payoffs, &raw.entries) {
        (Some(table), None) => {
            if raw.players.len() != 2 || raw.strategies.len() != 2 {
                return Err(inconsistent("a payoff table needs exactly two players"));
            }
            let rows = as_array(table, "payoffs")?;
            if rows.len() != raw.strategies[0].len() {
                return Err(inconsistent(format!(
                    "{} table rows for {} row strategies",
                    rows.len(),
                    raw.strategies[0].len()
                )));
            }
            for (r, row) in rows.iter().enumerate() {
                let cells = as_array(row, "payoff row")?;
                if cells.len() != raw.strategies[1].len() {
                    return Err(inconsistent(format!(
                        "row {r} has {} cells for {} column strategies",
                        cells.len(),
                        raw.strategies[1].len()
                    )));
                }
                for (c, cell) in cells.iter().enumerate() {
                    let pair = as_array(cell, "payoff cell")?;
                    if pair.len() != 2 {
                        return Err(inconsistent(format!("cell ({r}, {c}) needs two payoffs")));
                    }
                    let vector = pair.iter().map(value_to_rational).collect::<Result<_, _>>()?;
                    entries.push((Profile::new(vec![r, c]), vector));
                }
            }
        }
        (None, Some(list)) => {
            for entry in list {
                if entry.profile.len() != raw.players.len() {
                    return Err(inconsistent(format!(
                        "profile {:?} names {} strategies for {} players",
                        entry.profile,
                        entry.profile.len(),
                        raw.players.len()
                    )));
                }
                let indices = entry
                    .profile
                    .iter()
                    .enumerate()
                    .map(|(player, name)| {
                        raw.strategies
                            .get(player)
                            .and_then(|names| names.iter().position(|s| s == name))
                            .ok_or_else(|| FormatError::UnknownName {
                                kind: "strategy",
                                name: name.clone(),
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let vector = entry.payoffs.iter().map(value_to_rational).collect::<Result<_, _>>()?;
                entries.push((Profile::new(indices), vector));
            }
        }
        _ => {
            return Err(FormatError::Malformed(
                "a game needs exactly one of `payoffs` or `entries`".into(),
            ))
        }
    }
    Ok(make_game(raw.players, raw.strategies, entries)?)
}

pub fn parse_game(path: impl AsRef<Path>) -> Result<Game, FormatError> {
    parse_game_str(&std::fs::read_to_string(path)?)
}

/// Serializes a game: two-player games as a nested table, others as entries.
pub fn game_to_json(game: &Game) -> String {
    let strategies: Vec<&[String]> = (0..game.num_players()).map(|p| game.strategy_names(p)).collect();
    let payoff_strings = |profile: &Profile| -> Vec<String> {
        game.payoff_vector(profile)
            .expect("enumerated profile")
            .iter()
            .map(Rational::to_string)
            .collect()
    };
    let body = if game.num_players() == 2 {
        let table: Vec<Vec<Vec<String>>> = (0..game.num_strategies(0))
            .map(|r| {
                (0..game.num_strategies(1))
                    .map(|c| payoff_strings(&Profile::new(vec![r, c])))
                    .collect()
            })
            .collect();
        serde_json::json!({
            "players": game.player_names(),
            "strategies": strategies,
            "payoffs": table,
        })
    } else {
        let entries: Vec<Value> = game
            .profiles()
            .map(|profile| {
                let names: Vec<&str> = profile
                    .0
                    .iter()
                    .enumerate()
                    .map(|(p, &s)| game.strategy_name(p, s))
                    .collect();
                serde_json::json!({ "profile": names, "payoffs": payoff_strings(&profile) })
            })
            .collect();
        serde_json::json!({
            "players": game.player_names(),
            "strategies": strategies,
            "entries": entries,
        })
    };
    let mut text = serde_json::to_string_pretty(&body).expect("json value");
    text.push('\n');
    text
}

/// A threat described by player and strategy names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreatFile {
    pub scenario: Scenario,
    pub extorted: String,
    pub recipient: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extortioner: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_strategy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<Value>,
}

fn player_by_name(game: &Game, name: &str) -> Result<usize, FormatError> {
    game.player_index(name).ok_or_else(|| FormatError::UnknownName {
        kind: "player",
        name: name.to_string(),
    })
}

impl ThreatFile {
    pub fn parse_str(text: &str) -> Result<ThreatFile, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn parse(path: impl AsRef<Path>) -> Result<ThreatFile, FormatError> {
        ThreatFile::parse_str(&std::fs::read_to_string(path)?)
    }

    /// Resolves names against `game` and checks role consistency.
    pub fn resolve(&self, game: &Game) -> Result<ThreatRequest, FormatError> {
        let roles = Roles {
            scenario: self.scenario,
            extorted: player_by_name(game, &self.extorted)?,
            recipient: player_by_name(game, &self.recipient)?,
        };
        roles.validate(game)?;
        match (roles.extortioner(), &self.extortioner) {
            (Some(expected), Some(name)) if player_by_name(game, name)? != expected => {
                return Err(crate::EngineError::InvalidThreat(format!(
                    "the internal extortioner must be the extorted player's co-player, not `{name}`"
                ))
                .into())
            }
            (Some(_), _) => {}
            (None, Some(name)) => {
                return Err(crate::EngineError::InvalidThreat(format!(
                    "extortioner `{name}` is only allowed in the one-player-internal scenario"
                ))
                .into())
            }
            (None, None) => {}
        }
        let target = self
            .target_strategy
            .as_deref()
            .map(|name| {
                game.strategy_index(roles.recipient, name)
                    .ok_or_else(|| FormatError::UnknownName {
                        kind: "strategy",
                        name: name.to_string(),
                    })
            })
            .transpose()?;
        Ok(ThreatRequest {
            roles,
            target,
            fee: self.c1.as_ref().map(value_to_rational).transpose()?,
            payment: self.c2.as_ref().map(value_to_rational).transpose()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub creation: Rational,
    pub uniqueness: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub c1_max: Bound,
    pub c1_min: Option<Bound>,
    pub c2_min: Bound,
    pub c2_max: Option<Bound>,
}

/// An analysis report with names in place of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub scenario: Scenario,
    pub players: Vec<String>,
    pub extorted: String,
    pub recipient: String,
    pub extortioner: Option<String>,
    pub target_strategy: String,
    pub c1: Option<Rational>,
    pub c2: Option<Rational>,
    pub threat: String,
    /// Strategy names in player order.
    pub base_equilibrium: Vec<String>,
    pub accept_equilibrium: Vec<String>,
    pub decline_equilibrium: Vec<String>,
    pub thresholds: Thresholds,
    pub bounds: Bounds,
    pub decision: Option<Decision>,
    pub success: Option<bool>,
    pub feasible: bool,
    pub worthwhile: Option<bool>,
    pub extorted_payoffs: Option<SubgamePayoffs>,
    pub extortioner_payoffs: Option<SubgamePayoffs>,
    pub diagnostics: Vec<Diagnostic>,
}

/// "Either you pay me c1, or if you decline, I give c2 to player P whenever they play S"
pub fn threat_sentence(
    fee: Option<&Rational>,
    payment: Option<&Rational>,
    recipient: &str,
    target: &str,
) -> String {
    let fee = fee.map_or_else(|| "c1".to_string(), Rational::to_string);
    let payment = payment.map_or_else(|| "c2".to_string(), Rational::to_string);
    format!(
        "Either you pay me {fee}, or if you decline, I give {payment} to player {recipient} whenever they play {target}"
    )
}

fn named(game: &Game, profile: &Profile) -> Vec<String> {
    profile
        .0
        .iter()
        .enumerate()
        .map(|(p, &s)| game.strategy_name(p, s).to_string())
        .collect()
}

impl ReportFile {
    pub fn from_report(game: &Game, report: &ExtortionReport) -> ReportFile {
        let roles = report.roles;
        let recipient = game.player_name(roles.recipient).to_string();
        let target = game.strategy_name(roles.recipient, report.target).to_string();
        ReportFile {
            scenario: roles.scenario,
            players: game.player_names().to_vec(),
            extorted: game.player_name(roles.extorted).to_string(),
            threat: threat_sentence(report.fee.as_ref(), report.payment.as_ref(), &recipient, &target),
            recipient,
            extortioner: report.extortioner.map(|e| game.player_name(e).to_string()),
            target_strategy: target,
            c1: report.fee.clone(),
            c2: report.payment.clone(),
            base_equilibrium: named(game, &report.base_equilibrium),
            accept_equilibrium: named(game, &report.accept_equilibrium),
            decline_equilibrium: named(game, &report.decline_equilibrium),
            thresholds: Thresholds {
                creation: report.creation_threshold.clone(),
                uniqueness: report.uniqueness_threshold.clone(),
            },
            bounds: Bounds {
                c1_max: report.c1_max.clone(),
                c1_min: report.c1_min.clone(),
                c2_min: report.c2_min.clone(),
                c2_max: report.c2_max.clone(),
            },
            decision: report.decision,
            success: report.success,
            feasible: report.feasible,
            worthwhile: report.worthwhile,
            extorted_payoffs: report.extorted_payoffs.clone(),
            extortioner_payoffs: report.extortioner_payoffs.clone(),
            diagnostics: report.diagnostics.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn parse_str(text: &str) -> Result<ReportFile, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Multi-line plain-text summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(&mut out, format!("scenario: {}", self.scenario));
        line(&mut out, format!("threat to {}: \"{}\"", self.extorted, self.threat));
        line(&mut out, format!("base equilibrium: ({})", self.base_equilibrium.join(", ")));
        line(&mut out, format!("accept equilibrium: ({})", self.accept_equilibrium.join(", ")));
        line(&mut out, format!("decline equilibrium: ({})", self.decline_equilibrium.join(", ")));
        line(&mut out, format!("c1_max: {}", self.bounds.c1_max));
        if let Some(b) = &self.bounds.c1_min {
            line(&mut out, format!("c1_min: {b}"));
        }
        line(&mut out, format!("c2_min: {}", self.bounds.c2_min));
        if let Some(b) = &self.bounds.c2_max {
            line(&mut out, format!("c2_max: {b}"));
        }
        if let Some(p) = &self.extorted_payoffs {
            line(&mut out, format!("{} payoff: accept {} vs decline {}", self.extorted, p.accept, p.decline));
        }
        if let (Some(p), Some(name)) = (&self.extortioner_payoffs, &self.extortioner) {
            line(&mut out, format!("{name} payoff: accept {} vs decline {}", p.accept, p.decline));
        }
        if let Some(w) = self.worthwhile {
            line(&mut out, format!("worthwhile for extortioner: {w}"));
        }
        match self.decision {
            Some(d) => line(&mut out, format!("decision: {d:?}")),
            None => line(&mut out, "decision: (no concrete fee and payment)".to_string()),
        }
        line(&mut out, format!("feasible: {}", self.feasible));
        if let Some(failed) = self.diagnostics.iter().find(|d| !d.holds) {
            line(&mut out, format!("first failed condition: {} ({})", failed.condition, failed.detail));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONCORD: &str = include_str!("../data/concord.game");

    #[test]
    fn parses_bundled_concord() {
        let g = parse_game_str(CONCORD).unwrap();
        assert_eq!(g.player_names(), ["Row", "Column"]);
        assert_eq!(*g.payoff(&Profile::new(vec![1, 1]), 0).unwrap(), 10);
        assert_eq!(parse_game_str(&game_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_floats() {
        let text = CONCORD.replace("[4, 4]", "[0.5, 4]");
        let err = parse_game_str(&text).unwrap_err();
        assert!(err.to_string().contains("floating-point literal"), "{err}");
        let text = CONCORD.replace("[4, 4]", "[\"0.5\", 4]");
        assert!(parse_game_str(&text).unwrap_err().to_string().contains("use p/q"));
        let text = CONCORD.replace("[4, 4]", "[\"1/2\", 4]");
        let g = parse_game_str(&text).unwrap();
        assert_eq!(*g.payoff(&Profile::new(vec![0, 0]), 0).unwrap(), Rational::new(1, 2).unwrap());
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        let text = CONCORD.replace("[[6, 8], [10, 10]]", "[[6, 8]]");
        assert!(parse_game_str(&text).unwrap_err().to_string().contains("inconsistent dimensions"));
        let text = CONCORD.replace("[[4, 4], [8, 6]],\n    ", "");
        assert!(parse_game_str(&text).is_err());
        assert!(parse_game_str("{\"players\": []").is_err());
    }

    #[test]
    fn three_player_entries() {
        let mut entries = Vec::new();
        for a in ["x", "y"] {
            for b in ["x", "y"] {
                for c in ["x", "y"] {
                    entries.push(format!(
                        "{{\"profile\": [\"{a}\", \"{b}\", \"{c}\"], \"payoffs\": [1, \"2/3\", -4]}}"
                    ));
                }
            }
        }
        let text = format!(
            "{{\"players\": [\"A\", \"B\", \"C\"], \"strategies\": [[\"x\", \"y\"], [\"x\", \"y\"], [\"x\", \"y\"]], \"entries\": [{}]}}",
            entries.join(",")
        );
        let g = parse_game_str(&text).unwrap();
        assert_eq!(g.num_players(), 3);
        assert_eq!(parse_game_str(&game_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn threat_roles_are_checked() {
        let g = parse_game_str(CONCORD).unwrap();
        let ok = ThreatFile::parse_str(include_str!("../data/concord_two_player.threat")).unwrap();
        let req = ok.resolve(&g).unwrap();
        assert_eq!(req.target, Some(0));
        assert_eq!(req.fee, Some(Rational::integer(2)));

        let mut bad = ok.clone();
        bad.recipient = "Row".into();
        assert!(bad.resolve(&g).is_err());
        let mut bad = ok.clone();
        bad.extortioner = Some("Column".into());
        assert!(bad.resolve(&g).is_err());
        let mut bad = ok.clone();
        bad.target_strategy = Some("Z".into());
        assert!(matches!(bad.resolve(&g), Err(FormatError::UnknownName { .. })));
        let mut bad = ok;
        bad.c1 = Some(serde_json::json!(2.5));
        assert!(bad.resolve(&g).is_err());
    }

    #[test]
    fn sentence_template() {
        assert_eq!(
            threat_sentence(Some(&Rational::integer(2)), Some(&Rational::integer(3)), "Column", "L"),
            "Either you pay me 2, or if you decline, I give 3 to player Column whenever they play L"
        );
        assert!(threat_sentence(None, None, "Row", "T").contains("pay me c1"));
    }
}
