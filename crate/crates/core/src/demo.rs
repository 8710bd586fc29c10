//! Bundled worked examples with their expected outcomes checked on every run.

use crate::engine::{analyze, Decision, ExtortionReport};
use crate::error::DemoError;
use crate::files::{parse_game_str, ThreatFile};
use crate::game::{Game, Profile};
use crate::rational::Rational;

pub const DEMOS: [&str; 3] = ["concord", "asym-concord", "internal"];

const CONCORD: &str = include_str!("../data/concord.game");
const ASYM_CONCORD: &str = include_str!("../data/asym_concord.game");
const CONCORD_TWO_PLAYER: &str = include_str!("../data/concord_two_player.threat");
const ASYM_ONE_PLAYER: &str = include_str!("../data/asym_concord_one_player.threat");
const ASYM_INTERNAL: &str = include_str!("../data/asym_concord_internal.threat");

pub struct DemoRun {
    pub name: &'static str,
    pub game: Game,
    pub report: ExtortionReport,
}

struct Check<'a> {
    demo: &'a str,
}

impl Check<'_> {
    fn eq<T: PartialEq + std::fmt::Debug>(&self, quantity: &str, actual: T, expected: T) -> Result<(), DemoError> {
        if actual == expected {
            Ok(())
        } else {
            Err(DemoError::Mismatch {
                demo: self.demo.to_string(),
                quantity: quantity.to_string(),
                expected: format!("{expected:?}"),
                actual: format!("{actual:?}"),
            })
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::integer(n)
}

/// Runs a bundled demo and verifies its expected outcome.
pub fn run_demo(name: &str) -> Result<DemoRun, DemoError> {
    let (name, game_text, threat_text): (&'static str, _, _) = match name {
        "concord" => ("concord", CONCORD, CONCORD_TWO_PLAYER),
        "asym-concord" => ("asym-concord", ASYM_CONCORD, ASYM_ONE_PLAYER),
        "internal" => ("internal", ASYM_CONCORD, ASYM_INTERNAL),
        other => return Err(DemoError::Unknown(other.to_string())),
    };
    let game = parse_game_str(game_text)?;
    let request = ThreatFile::parse_str(threat_text)?.resolve(&game)?;
    let report = analyze(&game, &request)?;
    let check = Check { demo: name };

    check.eq("decision", report.decision, Some(Decision::Accept))?;
    check.eq("c2_min", &report.c2_min.value, &int(2))?;
    match name {
        "concord" => {
            check.eq("c1_max", &report.c1_max.value, &int(4))?;
            check.eq("accept equilibrium", &report.accept_equilibrium, &Profile::new(vec![1, 1]))?;
            check.eq("decline equilibrium", &report.decline_equilibrium, &Profile::new(vec![1, 0]))?;
        }
        "asym-concord" => {
            check.eq("c1_max", &report.c1_max.value, &int(3))?;
            check.eq("c2_max", report.c2_max.as_ref().map(|b| &b.value), Some(&int(4)))?;
            check.eq("decline equilibrium", &report.decline_equilibrium, &Profile::new(vec![0, 0]))?;
        }
        _ => {
            check.eq("worthwhile", report.worthwhile, Some(true))?;
            check.eq("c1_min", report.c1_min.as_ref().map(|b| &b.value), Some(&int(0)))?;
            check.eq("c1_max", &report.c1_max.value, &int(3))?;
            check.eq("c2_max", report.c2_max.as_ref().map(|b| &b.value), Some(&int(4)))?;
            let payoffs = report.extortioner_payoffs.as_ref().map(|p| (&p.accept, &p.decline));
            check.eq("extortioner payoffs", payoffs, Some((&int(12), &int(3))))?;
        }
    }
    Ok(DemoRun { name, game, report })
}
