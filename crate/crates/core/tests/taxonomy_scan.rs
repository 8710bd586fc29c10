use std::sync::OnceLock;

use extortion_core::taxonomy::{
    enumerate_ordinal_games, export_chart, one_player_structural, scan, ChartFormat,
    OrdinalGameRecord, OrdinalPayoffs, Scheme, CANONICAL_GAMES, RAW_GAMES,
};
use extortion_core::Profile;

fn records() -> &'static [OrdinalGameRecord] {
    static RECORDS: OnceLock<Vec<OrdinalGameRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| enumerate_ordinal_games().expect("scan succeeds"))
}

/// Brute-force count of strict 2x2 ordinal tables modulo row and column swaps,
/// computed by listing every table from scratch.
fn oracle_class_count() -> usize {
    let perms: Vec<[u8; 4]> = {
        let mut out = Vec::new();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        let v = [a, b, c, d];
                        let mut sorted = v;
                        sorted.sort();
                        if sorted == [1, 2, 3, 4] {
                            out.push(v);
                        }
                    }
                }
            }
        }
        out
    };
    let mut classes = std::collections::BTreeSet::new();
    for r in &perms {
        for c in &perms {
            let cells = |swap_r: bool, swap_c: bool| {
                let mut key = Vec::new();
                for i in 0..2 {
                    for j in 0..2 {
                        let (ii, jj) = (i ^ swap_r as usize, j ^ swap_c as usize);
                        key.push(r[2 * ii + jj]);
                        key.push(c[2 * ii + jj]);
                    }
                }
                key
            };
            let key = [(false, false), (true, false), (false, true), (true, true)]
                .iter()
                .map(|&(a, b)| cells(a, b))
                .min()
                .unwrap();
            classes.insert(key);
        }
    }
    classes.len()
}

#[test]
fn population_sizes() {
    assert_eq!(records().len(), RAW_GAMES);
    assert_eq!(oracle_class_count(), CANONICAL_GAMES);
    let ids: std::collections::BTreeSet<_> = records().iter().map(|r| r.canonical_id).collect();
    assert_eq!(ids.len(), CANONICAL_GAMES);
    for r in records() {
        assert_eq!(r.raw_id, r.payoffs.raw_id());
        assert_eq!(OrdinalPayoffs::from_raw_id(r.raw_id), r.payoffs);
    }
}

#[test]
fn headline_fractions() {
    let two = scan(records(), Scheme::TwoPlayer);
    assert_eq!(two.susceptible.headline(), "56.25% (324/576, 81/144)");
    assert_eq!(two.excluded.headline(), "25% (144/576, 36/144)");
    let one = scan(records(), Scheme::OnePlayer);
    assert_eq!(one.susceptible.headline(), "16.67% (96/576, 24/144)");
    assert_eq!(one.excluded.headline(), "25% (144/576, 36/144)");
    let internal = scan(records(), Scheme::Internal);
    assert_eq!(internal.susceptible.raw, 96);
}

#[test]
fn raw_and_canonical_fractions_agree() {
    for scheme in [Scheme::TwoPlayer, Scheme::OnePlayer, Scheme::Internal] {
        let s = scan(records(), scheme);
        assert_eq!(s.susceptible.raw_fraction(), s.susceptible.canonical_fraction(), "{scheme}");
        assert_eq!(s.susceptible.raw, 4 * s.susceptible.canonical);
        assert_eq!(s.excluded.raw, 4 * s.excluded.canonical);
        assert_eq!(s.raw_breakdown.total(), s.susceptible.raw);
    }
}

#[test]
fn excluded_games_lack_a_unique_equilibrium() {
    for r in records() {
        let unique = r.game.unique_pure_nash().is_some();
        assert_eq!(unique, r.flags.ne_count == 1);
        if !unique {
            let s = &r.susceptibility;
            assert_eq!(s.two_player, [false; 2]);
            assert_eq!(s.one_player, [false; 2]);
            assert_eq!(s.internal, [false; 2]);
        }
    }
}

/// Independent two-player characterization: once the recipient switches
/// to their other strategy, the player's best reply there pays strictly less
/// than the equilibrium.
#[test]
fn two_player_characterization() {
    for r in records() {
        let Some(eq) = &r.flags.equilibrium else { continue };
        let (er, ec) = (eq.strategy(0), eq.strategy(1));
        for player in 0..2 {
            let at_eq = r.payoffs.rank(player, er, ec);
            let best_after_shift = if player == 0 {
                (0..2).map(|row| r.payoffs.rank(0, row, 1 - ec)).max().unwrap()
            } else {
                (0..2).map(|col| r.payoffs.rank(1, 1 - er, col)).max().unwrap()
            };
            assert_eq!(r.susceptibility.two_player[player], at_eq > best_after_shift, "raw {}", r.raw_id);
        }
    }
}

#[test]
fn one_player_characterization_and_subset_chain() {
    for r in records() {
        let s = &r.susceptibility;
        for player in 0..2 {
            assert_eq!(s.one_player[player], one_player_structural(&r.flags, player));
            assert!(!s.internal[player] || s.one_player[player]);
            assert!(!s.one_player[player] || s.two_player[player], "raw {}", r.raw_id);
        }
    }
}

#[test]
fn one_player_games_satisfy_restriction_one() {
    for r in records() {
        for player in 0..2 {
            if r.susceptibility.one_player[player] {
                assert_eq!(r.game.dominant_strategy(1 - player).unwrap(), None);
                assert!(r.flags.dominant[player].is_some());
            }
        }
    }
}

#[test]
fn one_player_winners_are_never_both_players() {
    let one = scan(records(), Scheme::OnePlayer);
    assert_eq!(one.raw_breakdown.both, 0);
    let svg = export_chart(&one, records(), ChartFormat::Svg).unwrap();
    assert!(!svg.contains("stroke=\"black\""));
}

#[test]
fn two_player_chart_borders_match_breakdown() {
    let two = scan(records(), Scheme::TwoPlayer);
    let svg = export_chart(&two, records(), ChartFormat::Svg).unwrap();
    let count = |color: &str| svg.matches(&format!("stroke=\"{color}\"")).count();
    assert_eq!(count("black"), two.canonical_breakdown.both);
    assert_eq!(count("red"), two.canonical_breakdown.row_only);
    assert_eq!(count("blue"), two.canonical_breakdown.column_only);
}

#[test]
fn csv_has_one_row_per_class() {
    let two = scan(records(), Scheme::TwoPlayer);
    let csv = export_chart(&two, records(), ChartFormat::Csv).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 20);
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), CANONICAL_GAMES);
    let ids: Vec<usize> = rows.iter().map(|row| row[0].parse().unwrap()).collect();
    assert_eq!(ids, (0..CANONICAL_GAMES).collect::<Vec<_>>());
    for row in &rows {
        let mut ranks: Vec<u8> = (1..9).step_by(2).map(|i| row[i].parse().unwrap()).collect();
        ranks.sort();
        assert_eq!(ranks, [1, 2, 3, 4]);
    }
}

#[test]
fn extortioner_risk_on_win_win_games() {
    // A player topping out at the equilibrium loses from any shift away from it.
    for r in records() {
        if r.flags.best_at_ne == [true, true] {
            assert_eq!(r.susceptibility.two_player, [true; 2], "raw {}", r.raw_id);
        }
        for player in 0..2 {
            if r.susceptibility.one_player[player] && r.flags.best_at_ne[1 - player] {
                assert!(r.susceptibility.extortioner_risk[player], "raw {}", r.raw_id);
            }
        }
    }
}

#[test]
fn internal_requires_extortioner_to_gain_more_than_shift_costs() {
    for r in records() {
        for player in 0..2 {
            if r.susceptibility.one_player[player] && !r.susceptibility.internal[player] {
                assert!(r.susceptibility.extortioner_risk[player], "raw {}", r.raw_id);
            }
        }
    }
}

#[test]
fn asymmetric_concord_skeleton_is_worthwhile() {
    // Ranks of the asymmetric Concord table.
    let payoffs = OrdinalPayoffs { row: [1, 3, 2, 4], col: [2, 1, 3, 4] };
    let r = &records()[payoffs.raw_id()];
    assert!(r.susceptibility.one_player[0]);
    assert!(r.susceptibility.internal[0]);
    assert_eq!(r.flags.equilibrium, Some(Profile::new(vec![1, 1])));
}
