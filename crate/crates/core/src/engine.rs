//! Binding threats, the Accept/Decline subgames they induce, and the
//! conditions and bounds that decide whether an extortion attempt succeeds.
//!
//! Every bound produced here is an open endpoint. Payoff equality at any
//! comparison that must be strict resolves to the conservative verdict
//! (Decline, condition failed).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::game::{Game, Profile};
use crate::rational::Rational;

/// Role assignment of an extortion attempt in a two-player base game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// External extortioner; the payment goes to the extorted player's co-player.
    TwoPlayerExternal,
    /// External extortioner; the extorted player also receives the payment.
    OnePlayerExternal,
    /// The co-player is the extortioner and the extorted player receives the payment.
    OnePlayerInternal,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [
        Scenario::TwoPlayerExternal,
        Scenario::OnePlayerExternal,
        Scenario::OnePlayerInternal,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Scenario::TwoPlayerExternal => "two-player-external",
            Scenario::OnePlayerExternal => "one-player-external",
            Scenario::OnePlayerInternal => "one-player-internal",
        }
    }

    pub fn is_one_player(self) -> bool {
        !matches!(self, Scenario::TwoPlayerExternal)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|scenario| scenario.label() == s)
            .ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

/// Conditions checked during an analysis, labelled for reports and error output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "assumption-1")]
    Assumption1,
    #[serde(rename = "theorem-2-creation")]
    Theorem2Creation,
    #[serde(rename = "theorem-2-uniqueness")]
    Theorem2Uniqueness,
    #[serde(rename = "theorem-2-enumeration")]
    DeclineEnumeration,
    #[serde(rename = "susceptible")]
    Susceptible,
    #[serde(rename = "theorem-1")]
    Theorem1,
    #[serde(rename = "restriction-I")]
    RestrictionI,
    #[serde(rename = "restriction-II")]
    RestrictionII,
    #[serde(rename = "worthwhile")]
    Worthwhile,
    #[serde(rename = "worthwhile-games")]
    WorthwhileGames,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::Assumption1 => "assumption-1",
            Condition::Theorem2Creation => "theorem-2-creation",
            Condition::Theorem2Uniqueness => "theorem-2-uniqueness",
            Condition::DeclineEnumeration => "theorem-2-enumeration",
            Condition::Susceptible => "susceptible",
            Condition::Theorem1 => "theorem-1",
            Condition::RestrictionI => "restriction-I",
            Condition::RestrictionII => "restriction-II",
            Condition::Worthwhile => "worthwhile",
            Condition::WorthwhileGames => "worthwhile-games",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Decline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Upper,
    Lower,
}

/// Open endpoint on a fee or payment: valid values lie strictly on the inner side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: Rational,
    pub side: BoundSide,
    #[serde(deserialize_with = "exclusive_only")]
    pub exclusive: bool,
}

fn exclusive_only<'de, D: serde::Deserializer<'de>>(deserializer: D) -> Result<bool, D::Error> {
    let value = bool::deserialize(deserializer)?;
    if value {
        Ok(true)
    } else {
        Err(serde::de::Error::custom("bounds are always exclusive"))
    }
}

impl Bound {
    pub fn upper(value: Rational) -> Bound {
        Bound {
            value,
            side: BoundSide::Upper,
            exclusive: true,
        }
    }

    pub fn lower(value: Rational) -> Bound {
        Bound {
            value,
            side: BoundSide::Lower,
            exclusive: true,
        }
    }

    /// Strict comparison against the endpoint.
    pub fn admits(&self, x: &Rational) -> bool {
        match self.side {
            BoundSide::Upper => x < &self.value,
            BoundSide::Lower => x > &self.value,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.side {
            BoundSide::Upper => "<",
            BoundSide::Lower => ">",
        };
        write!(f, "{op} {} (exclusive)", self.value)
    }
}

/// Who is extorted and who receives the conditional payment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Roles {
    pub scenario: Scenario,
    pub extorted: usize,
    pub recipient: usize,
}

impl Roles {
    /// Roles implied by `scenario` when `extorted` is the extorted player of a two-player game.
    pub fn for_scenario(scenario: Scenario, extorted: usize) -> Roles {
        let recipient = match scenario {
            Scenario::TwoPlayerExternal => 1 - extorted.min(1),
            _ => extorted,
        };
        Roles {
            scenario,
            extorted,
            recipient,
        }
    }

    /// The extorted player's co-player.
    pub fn co_player(&self) -> usize {
        1 - self.extorted
    }

    /// The extortioner when it is a player of the base game.
    pub fn extortioner(&self) -> Option<usize> {
        (self.scenario == Scenario::OnePlayerInternal).then(|| self.co_player())
    }

    pub fn validate(&self, base: &Game) -> Result<(), EngineError> {
        if base.num_players() != 2 {
            return Err(EngineError::NotTwoPlayer {
                players: base.num_players(),
            });
        }
        base.check_player(self.extorted)?;
        base.check_player(self.recipient)?;
        match self.scenario {
            Scenario::TwoPlayerExternal if self.extorted == self.recipient => Err(
                EngineError::InvalidThreat(
                    "two-player extortion needs distinct extorted player and recipient".into(),
                ),
            ),
            Scenario::OnePlayerExternal | Scenario::OnePlayerInternal
                if self.extorted != self.recipient =>
            {
                Err(EngineError::InvalidThreat(
                    "one-player extortion needs the extorted player to be the recipient".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// "Either you pay me `fee`, or if you decline, I give `payment` to the
/// recipient whenever they play `target`."
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingThreat {
    pub roles: Roles,
    pub target: usize,
    pub fee: Rational,
    pub payment: Rational,
}

impl BindingThreat {
    pub fn new(roles: Roles, target: usize, fee: Rational, payment: Rational) -> BindingThreat {
        BindingThreat {
            roles,
            target,
            fee,
            payment,
        }
    }

    /// Checks everything that does not depend on the base game's equilibrium.
    pub fn check_structure(&self, base: &Game) -> Result<(), EngineError> {
        self.roles.validate(base)?;
        base.check_strategy(self.roles.recipient, self.target)?;
        if !self.fee.is_positive() {
            return Err(EngineError::InvalidThreat(format!(
                "fee must be positive, got {}",
                self.fee
            )));
        }
        if !self.payment.is_positive() {
            return Err(EngineError::InvalidThreat(format!(
                "payment must be positive, got {}",
                self.payment
            )));
        }
        Ok(())
    }

    /// Full validation; returns the base game's unique equilibrium.
    pub fn validate(&self, base: &Game) -> Result<Profile, EngineError> {
        self.check_structure(base)?;
        let base_eq = unique_equilibrium(base)?;
        if base_eq.strategy(self.roles.recipient) == self.target {
            return Err(EngineError::TargetIsEquilibriumStrategy);
        }
        Ok(base_eq)
    }
}

fn unique_equilibrium(base: &Game) -> Result<Profile, EngineError> {
    let mut equilibria = base.pure_nash_equilibria();
    if equilibria.len() == 1 {
        Ok(equilibria.remove(0))
    } else {
        Err(EngineError::NoUniqueEquilibrium {
            count: equilibria.len(),
        })
    }
}

/// The game played after the extorted player pays the fee.
pub fn accept_game(base: &Game, threat: &BindingThreat) -> Result<Game, EngineError> {
    threat.check_structure(base)?;
    let extorted = threat.roles.extorted;
    let extortioner = threat.roles.extortioner();
    Ok(base.map_payoffs(|_, player, value| {
        if player == extorted {
            value - &threat.fee
        } else if Some(player) == extortioner {
            value + &threat.fee
        } else {
            value.clone()
        }
    }))
}

/// The game played after the extorted player refuses and the payment is made.
pub fn decline_game(base: &Game, threat: &BindingThreat) -> Result<Game, EngineError> {
    threat.check_structure(base)?;
    let recipient = threat.roles.recipient;
    let extortioner = threat.roles.extortioner();
    Ok(base.map_payoffs(|profile, player, value| {
        let triggered = profile.strategy(recipient) == threat.target;
        if triggered && player == recipient {
            value + &threat.payment
        } else if triggered && Some(player) == extortioner {
            value - &threat.payment
        } else {
            value.clone()
        }
    }))
}

fn check_two_player_target(base: &Game, recipient: usize, target: usize) -> Result<(), EngineError> {
    if base.num_players() != 2 {
        return Err(EngineError::NotTwoPlayer {
            players: base.num_players(),
        });
    }
    base.check_strategy(recipient, target)?;
    Ok(())
}

/// The profile the payment is meant to install: the recipient plays `target`
/// and the co-player plays their strict best response to it. `None` when
/// that best response is not strict.
pub fn decline_equilibrium_target(
    base: &Game,
    recipient: usize,
    target: usize,
) -> Result<Option<Profile>, EngineError> {
    check_two_player_target(base, recipient, target)?;
    let co = 1 - recipient;
    let mut anchor = Profile::new(vec![0, 0]);
    anchor.0[recipient] = target;
    let response = base.best_responses(co, &anchor)?;
    Ok(response.unique().map(|b| anchor.with(co, b)))
}

fn require_decline_target(base: &Game, recipient: usize, target: usize) -> Result<Profile, EngineError> {
    decline_equilibrium_target(base, recipient, target)?.ok_or_else(|| EngineError::Degenerate {
        condition: Condition::Theorem2Creation,
        detail: format!(
            "player {} has no strict best response to strategy {} of player {}",
            base.player_name(1 - recipient),
            base.strategy_name(recipient, target),
            base.player_name(recipient)
        ),
    })
}

/// Payment the recipient must strictly exceed for the target profile to become an equilibrium.
pub fn creation_threshold(base: &Game, recipient: usize, target: usize) -> Result<Rational, EngineError> {
    let shifted = require_decline_target(base, recipient, target)?;
    let at_target = base.u(&shifted, recipient);
    let threshold = (0..base.num_strategies(recipient))
        .filter(|&s| s != target)
        .map(|s| base.u(&shifted.with(recipient, s), recipient) - at_target)
        .max()
        .expect("at least two strategies");
    Ok(threshold)
}

/// Payment the recipient must strictly exceed for the base equilibrium to stop being one.
pub fn uniqueness_threshold(base: &Game, recipient: usize, target: usize) -> Result<Rational, EngineError> {
    check_two_player_target(base, recipient, target)?;
    let base_eq = unique_equilibrium(base)?;
    Ok(base.u(&base_eq, recipient) - base.u(&base_eq.with(recipient, target), recipient))
}

/// Base game with only the recipient's conditional payment applied. Has the
/// same equilibria as any decline game with these parameters.
fn payment_game(base: &Game, recipient: usize, target: usize, payment: &Rational) -> Game {
    base.map_payoffs(|profile, player, value| {
        if player == recipient && profile.strategy(recipient) == target {
            value + payment
        } else {
            value.clone()
        }
    })
}

/// Infimum of the payments that make the target profile the decline game's
/// unique equilibrium. The prediction is re-verified by enumeration at
/// `bound + 1`.
pub fn min_required_payment(base: &Game, recipient: usize, target: usize) -> Result<Bound, EngineError> {
    let creation = creation_threshold(base, recipient, target)?;
    let uniqueness = uniqueness_threshold(base, recipient, target)?;
    let bound = creation.max_of(uniqueness);
    let predicted = require_decline_target(base, recipient, target)?;
    let witness = &bound + Rational::one();
    let equilibria = payment_game(base, recipient, target, &witness).pure_nash_equilibria();
    if equilibria != [predicted.clone()] {
        return Err(EngineError::UniquenessContradiction(format!(
            "at c2 = {witness} the decline game has equilibria {equilibria:?}, expected only {predicted:?}"
        )));
    }
    Ok(Bound::lower(bound))
}

/// The extensive-form game induced by a binding threat: the extorted player
/// picks Accept or Decline, then the chosen subgame is played.
#[derive(Debug, Clone)]
pub struct ManipulatedGame {
    pub base: Game,
    pub threat: BindingThreat,
    pub accept: Game,
    pub decline: Game,
}

impl ManipulatedGame {
    pub fn new(base: &Game, threat: &BindingThreat) -> Result<ManipulatedGame, EngineError> {
        threat.validate(base)?;
        Ok(ManipulatedGame {
            accept: accept_game(base, threat)?,
            decline: decline_game(base, threat)?,
            base: base.clone(),
            threat: threat.clone(),
        })
    }

    pub fn accept_equilibrium(&self) -> Result<Profile, EngineError> {
        subgame_equilibrium(&self.accept, "accept")
    }

    pub fn decline_equilibrium(&self) -> Result<Profile, EngineError> {
        subgame_equilibrium(&self.decline, "decline")
    }
}

fn subgame_equilibrium(game: &Game, subgame: &'static str) -> Result<Profile, EngineError> {
    let mut equilibria = game.pure_nash_equilibria();
    if equilibria.len() == 1 {
        Ok(equilibria.remove(0))
    } else {
        Err(EngineError::NonUniqueSubgame {
            subgame,
            count: equilibria.len(),
        })
    }
}

/// Whether the extorted player strictly prefers the Accept subgame.
pub fn extortion_succeeds(m: &ManipulatedGame) -> Result<bool, EngineError> {
    let extorted = m.threat.roles.extorted;
    let accept_eq = m.accept_equilibrium()?;
    let decline_eq = m.decline_equilibrium()?;
    Ok(m.accept.u(&accept_eq, extorted) > m.decline.u(&decline_eq, extorted))
}

/// The extorted player's choice at the root under subgame perfection.
pub fn spe_decision(m: &ManipulatedGame) -> Result<Decision, EngineError> {
    Ok(if extortion_succeeds(m)? {
        Decision::Accept
    } else {
        Decision::Decline
    })
}

/// Whether moving the equilibrium to the target profile strictly hurts the extorted player.
pub fn is_susceptible(
    base: &Game,
    extorted: usize,
    recipient: usize,
    target: usize,
) -> Result<bool, EngineError> {
    base.check_player(extorted)?;
    let base_eq = unique_equilibrium(base)?;
    let shifted = require_decline_target(base, recipient, target)?;
    Ok(base.u(&base_eq, extorted) > base.u(&shifted, extorted))
}

/// Everything about one (roles, target) pair that does not depend on the fee.
#[derive(Debug, Clone)]
struct Shift {
    base_eq: Profile,
    decline_eq: Profile,
    creation: Rational,
    uniqueness: Rational,
    /// Payment infimum from the creation and uniqueness thresholds.
    c2_min: Rational,
    /// Extorted player's base payoff drop from the base to the shifted equilibrium.
    gap: Rational,
    /// Extortioner player's base payoff change from the base to the shifted equilibrium.
    extortioner_shift: Option<Rational>,
    witness: Rational,
}

fn compute_shift(base: &Game, roles: &Roles, target: usize) -> Result<Shift, EngineError> {
    roles.validate(base)?;
    base.check_strategy(roles.recipient, target)?;
    let base_eq = unique_equilibrium(base)?;
    if base_eq.strategy(roles.recipient) == target {
        return Err(EngineError::TargetIsEquilibriumStrategy);
    }
    let decline_eq = require_decline_target(base, roles.recipient, target)?;
    let creation = creation_threshold(base, roles.recipient, target)?;
    let uniqueness = uniqueness_threshold(base, roles.recipient, target)?;
    let c2_min = min_required_payment(base, roles.recipient, target)?.value;
    let gap = base.u(&base_eq, roles.extorted) - base.u(&decline_eq, roles.extorted);
    let extortioner_shift = roles
        .extortioner()
        .map(|e| base.u(&decline_eq, e) - base.u(&base_eq, e));
    let witness = &c2_min + Rational::one();
    Ok(Shift {
        base_eq,
        decline_eq,
        creation,
        uniqueness,
        c2_min,
        gap,
        extortioner_shift,
        witness,
    })
}

fn require_one_player(roles: &Roles) -> Result<(), EngineError> {
    if roles.scenario.is_one_player() {
        Ok(())
    } else {
        Err(EngineError::InvalidThreat(
            "this bound applies to one-player extortion only".into(),
        ))
    }
}

/// Supremum of the fee the extorted player still accepts, given the payment.
pub fn max_extractable_profit(
    base: &Game,
    roles: &Roles,
    target: usize,
    payment: &Rational,
) -> Result<Bound, EngineError> {
    let shift = compute_shift(base, roles, target)?;
    if payment <= &shift.c2_min {
        return Err(EngineError::Infeasible {
            condition: Condition::Theorem2Uniqueness,
            detail: format!("payment {payment} does not exceed c2_min = {}", shift.c2_min),
        });
    }
    let value = match roles.scenario {
        Scenario::TwoPlayerExternal => shift.gap,
        _ => shift.gap - payment,
    };
    if !value.is_positive() {
        return Err(EngineError::Infeasible {
            condition: Condition::Theorem1,
            detail: format!("maximum extractable profit {value} is not positive"),
        });
    }
    Ok(Bound::upper(value))
}

/// Supremum of the payment that keeps a one-player extortion successful, given the fee.
pub fn max_allowed_payment(
    base: &Game,
    roles: &Roles,
    target: usize,
    fee: &Rational,
) -> Result<Bound, EngineError> {
    require_one_player(roles)?;
    if !fee.is_positive() {
        return Err(EngineError::InvalidThreat(format!("fee must be positive, got {fee}")));
    }
    let shift = compute_shift(base, roles, target)?;
    let value = &shift.gap - fee;
    let lower = payment_floor(&shift, Some(fee));
    if value <= lower {
        return Err(EngineError::Infeasible {
            condition: Condition::RestrictionII,
            detail: format!("maximum allowed payment {value} does not exceed the payment floor {lower}"),
        });
    }
    Ok(Bound::upper(value))
}

/// Lower payment endpoint: the threshold infimum, raised in the internal
/// scenario by the extortioner's worthwhile condition when the fee is known.
fn payment_floor(shift: &Shift, fee: Option<&Rational>) -> Rational {
    match (&shift.extortioner_shift, fee) {
        (Some(delta), Some(fee)) => shift.c2_min.clone().max_of(delta - fee),
        _ => shift.c2_min.clone(),
    }
}

/// Restriction I of one-player extortion: the co-player must change strategy.
/// Cross-checked against the co-player having no dominant strategy on 2x2 games.
pub fn restriction_one_feasible(base: &Game, player: usize, target: usize) -> Result<bool, EngineError> {
    let roles = Roles::for_scenario(Scenario::OnePlayerExternal, player);
    let shift = compute_shift(base, &roles, target)?;
    restriction_one(base, &roles, &shift)
}

fn restriction_one(base: &Game, roles: &Roles, shift: &Shift) -> Result<bool, EngineError> {
    let co = roles.co_player();
    let moves = shift.decline_eq.strategy(co) != shift.base_eq.strategy(co);
    let is_2x2 = base.num_strategies(0) == 2 && base.num_strategies(1) == 2;
    if is_2x2 {
        let no_dominant = base.dominant_strategy(co)?.is_none();
        if no_dominant != moves {
            return Err(EngineError::Inconsistent(format!(
                "co-player shift = {moves} but co-player lacks a dominant strategy = {no_dominant}"
            )));
        }
    }
    Ok(moves)
}

/// Restriction II of one-player extortion: the equilibrium payoff drop must
/// strictly exceed the minimum required payment.
pub fn restriction_two_feasible(base: &Game, player: usize, target: usize) -> Result<bool, EngineError> {
    let roles = Roles::for_scenario(Scenario::OnePlayerExternal, player);
    let shift = compute_shift(base, &roles, target)?;
    Ok(shift.gap > shift.c2_min)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Worthwhile {
    pub holds: bool,
    /// Extortioner's payoff at the Accept equilibrium (fee included).
    pub accept_payoff: Rational,
    /// Extortioner's payoff at the Decline equilibrium (payment included).
    pub decline_payoff: Rational,
    /// Base-payoff precondition: the extorted player's drop exceeds the
    /// extortioner's gain from the shift.
    pub games_precondition: bool,
}

/// Whether issuing the threat pays off for an extortioner who is a player of the game.
pub fn worthwhile_for_extortioner(m: &ManipulatedGame) -> Result<Worthwhile, EngineError> {
    let roles = &m.threat.roles;
    let extortioner = roles.extortioner().ok_or_else(|| {
        EngineError::InvalidThreat("the worthwhile condition needs an internal extortioner".into())
    })?;
    let accept_eq = m.accept_equilibrium()?;
    let decline_eq = m.decline_equilibrium()?;
    let accept_payoff = m.accept.u(&accept_eq, extortioner).clone();
    let decline_payoff = m.decline.u(&decline_eq, extortioner).clone();
    let base = &m.base;
    let extorted_drop = base.u(&accept_eq, roles.extorted) - base.u(&decline_eq, roles.extorted);
    let extortioner_gain = base.u(&decline_eq, extortioner) - base.u(&accept_eq, extortioner);
    Ok(Worthwhile {
        holds: accept_payoff > decline_payoff,
        accept_payoff,
        decline_payoff,
        games_precondition: extorted_drop > extortioner_gain,
    })
}

/// Infimum of the fee an internal extortioner needs for the threat to be worthwhile.
pub fn min_profit_internal(
    base: &Game,
    roles: &Roles,
    target: usize,
    payment: &Rational,
) -> Result<Bound, EngineError> {
    if roles.scenario != Scenario::OnePlayerInternal {
        return Err(EngineError::InvalidThreat(
            "minimum profit applies to an internal extortioner only".into(),
        ));
    }
    let shift = compute_shift(base, roles, target)?;
    let delta = shift.extortioner_shift.expect("internal scenario");
    Ok(Bound::lower((delta - payment).max_of(Rational::zero())))
}

/// What to analyze: roles plus whichever of target, fee and payment are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreatRequest {
    pub roles: Roles,
    pub target: Option<usize>,
    pub fee: Option<Rational>,
    pub payment: Option<Rational>,
}

impl ThreatRequest {
    pub fn bounds(roles: Roles) -> ThreatRequest {
        ThreatRequest {
            roles,
            target: None,
            fee: None,
            payment: None,
        }
    }

    pub fn concrete(threat: &BindingThreat) -> ThreatRequest {
        ThreatRequest {
            roles: threat.roles,
            target: Some(threat.target),
            fee: Some(threat.fee.clone()),
            payment: Some(threat.payment.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub condition: Condition,
    pub holds: bool,
    pub detail: String,
}

/// Equilibrium payoffs of one player in the two subgames.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgamePayoffs {
    pub accept: Rational,
    pub decline: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtortionReport {
    pub roles: Roles,
    pub extortioner: Option<usize>,
    pub target: usize,
    pub fee: Option<Rational>,
    pub payment: Option<Rational>,
    pub base_equilibrium: Profile,
    pub accept_equilibrium: Profile,
    /// Enumerated when the payment is fixed and the decline game has a
    /// unique equilibrium; otherwise the predicted target profile.
    pub decline_equilibrium: Profile,
    pub creation_threshold: Rational,
    pub uniqueness_threshold: Rational,
    pub c2_min: Bound,
    pub c2_max: Option<Bound>,
    pub c1_max: Bound,
    pub c1_min: Option<Bound>,
    pub decision: Option<Decision>,
    pub success: Option<bool>,
    pub feasible: bool,
    pub worthwhile: Option<bool>,
    pub extorted_payoffs: Option<SubgamePayoffs>,
    pub extortioner_payoffs: Option<SubgamePayoffs>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ExtortionReport {
    pub fn diagnostic(&self, condition: Condition) -> Option<&Diagnostic> {
        self.diagnostics.iter().find(|d| d.condition == condition)
    }

    pub fn first_failure(&self) -> Option<&Diagnostic> {
        self.diagnostics.iter().find(|d| !d.holds)
    }
}

/// Full analysis of a threat against a base game. Without a fixed target,
/// every non-equilibrium strategy of the recipient is tried and the one with
/// the largest fee bound is kept (lowest index on ties).
pub fn analyze(base: &Game, request: &ThreatRequest) -> Result<ExtortionReport, EngineError> {
    let roles = &request.roles;
    roles.validate(base)?;
    for (name, value) in [("fee", &request.fee), ("payment", &request.payment)] {
        if let Some(v) = value {
            if !v.is_positive() {
                return Err(EngineError::InvalidThreat(format!("{name} must be positive, got {v}")));
            }
        }
    }
    let base_eq = unique_equilibrium(base)?;
    let candidates: Vec<usize> = match request.target {
        Some(t) => {
            base.check_strategy(roles.recipient, t)?;
            if t == base_eq.strategy(roles.recipient) {
                return Err(EngineError::TargetIsEquilibriumStrategy);
            }
            vec![t]
        }
        None => (0..base.num_strategies(roles.recipient))
            .filter(|&s| s != base_eq.strategy(roles.recipient))
            .collect(),
    };

    let mut best: Option<ExtortionReport> = None;
    let mut first_error = None;
    for target in candidates {
        match analyze_target(base, request, target) {
            Ok(report) => {
                if best.as_ref().is_none_or(|b| report.c1_max.value > b.c1_max.value) {
                    best = Some(report);
                }
            }
            Err(err) => {
                first_error.get_or_insert(err);
            }
        }
    }
    best.ok_or_else(|| first_error.expect("at least one candidate target"))
}

fn diag(condition: Condition, holds: bool, detail: impl Into<String>) -> Diagnostic {
    Diagnostic {
        condition,
        holds,
        detail: detail.into(),
    }
}

fn payment_diag(condition: Condition, threshold: &Rational, payment: Option<&Rational>) -> Diagnostic {
    match payment {
        Some(c2) => diag(condition, c2 > threshold, format!("c2 = {c2} vs threshold {threshold}")),
        None => diag(condition, true, format!("requires c2 > {threshold}")),
    }
}

fn analyze_target(base: &Game, request: &ThreatRequest, target: usize) -> Result<ExtortionReport, EngineError> {
    let roles = request.roles;
    let shift = compute_shift(base, &roles, target)?;
    let fee = request.fee.as_ref();
    let payment = request.payment.as_ref();
    let one_player = roles.scenario.is_one_player();

    let mut diagnostics = vec![
        diag(
            Condition::Assumption1,
            true,
            format!("unique pure equilibrium {:?}", shift.base_eq),
        ),
        payment_diag(Condition::Theorem2Creation, &shift.creation, payment),
        payment_diag(Condition::Theorem2Uniqueness, &shift.uniqueness, payment),
        diag(
            Condition::DeclineEnumeration,
            true,
            format!(
                "at witness c2 = {} the decline game's only equilibrium is {:?}",
                shift.witness, shift.decline_eq
            ),
        ),
        diag(
            Condition::Susceptible,
            shift.gap.is_positive(),
            format!("extorted player's payoff drop from the shift is {}", shift.gap),
        ),
    ];

    let c2_floor = payment_floor(&shift, fee);
    let c2_min = Bound::lower(c2_floor.clone());
    let c1_max;
    let mut c2_max = None;
    let mut c1_min = None;
    let feasible;

    if one_player {
        let moves = restriction_one(base, &roles, &shift)?;
        diagnostics.push(diag(
            Condition::RestrictionI,
            moves,
            if moves {
                "co-player changes strategy in the shifted equilibrium".to_string()
            } else {
                "co-player keeps their strategy; co-player has dominant strategy".to_string()
            },
        ));
        let restriction_two = shift.gap > shift.c2_min;
        diagnostics.push(diag(
            Condition::RestrictionII,
            restriction_two,
            format!("payoff drop {} vs c2_min {}", shift.gap, shift.c2_min),
        ));
        c1_max = Bound::upper(&shift.gap - payment.unwrap_or(&c2_floor));
        c2_max = fee.map(|f| Bound::upper(&shift.gap - f));

        let delta = shift.extortioner_shift.clone();
        if let Some(delta) = &delta {
            let precondition = &shift.gap > delta;
            diagnostics.push(diag(
                Condition::WorthwhileGames,
                precondition,
                format!("payoff drop {} vs extortioner gain {}", shift.gap, delta),
            ));
            let floor = match payment {
                Some(c2) => delta - c2,
                None => delta - &shift.gap,
            };
            c1_min = Some(Bound::lower(floor.max_of(Rational::zero())));
        }

        // Valid region: c1 > 0, c2 > c2_min, c1 + c2 < gap and, when internal, c1 + c2 > delta.
        let zero = Rational::zero();
        let worth = |sum_lower: &Rational| delta.as_ref().is_none_or(|d| sum_lower > d);
        feasible = moves
            && restriction_two
            && match (fee, payment) {
                (None, None) => delta.as_ref().is_none_or(|d| &shift.gap > d),
                (Some(c1), None) => &shift.gap - c1 > c2_floor,
                (None, Some(c2)) => {
                    let lo = delta.as_ref().map_or(zero.clone(), |d| (d - c2).max_of(zero.clone()));
                    c2 > &shift.c2_min && &shift.gap - c2 > lo
                }
                (Some(c1), Some(c2)) => {
                    c2 > &shift.c2_min && c1 + c2 < shift.gap && worth(&(c1 + c2))
                }
            };
    } else {
        c1_max = Bound::upper(shift.gap.clone());
        feasible = shift.gap.is_positive()
            && fee.is_none_or(|c1| c1 < &shift.gap)
            && payment.is_none_or(|c2| c2 > &shift.c2_min);
    }

    let mut report = ExtortionReport {
        roles,
        extortioner: roles.extortioner(),
        target,
        fee: request.fee.clone(),
        payment: request.payment.clone(),
        accept_equilibrium: shift.base_eq.clone(),
        base_equilibrium: shift.base_eq.clone(),
        decline_equilibrium: shift.decline_eq.clone(),
        creation_threshold: shift.creation.clone(),
        uniqueness_threshold: shift.uniqueness.clone(),
        c2_min,
        c2_max,
        c1_max,
        c1_min,
        decision: None,
        success: None,
        feasible,
        worthwhile: None,
        extorted_payoffs: None,
        extortioner_payoffs: None,
        diagnostics,
    };

    if let (Some(c1), Some(c2)) = (fee, payment) {
        let threat = BindingThreat::new(roles, target, c1.clone(), c2.clone());
        decide(base, &threat, &mut report)?;
    }
    Ok(report)
}

/// Solves both subgames for a concrete threat and records the root decision.
fn decide(base: &Game, threat: &BindingThreat, report: &mut ExtortionReport) -> Result<(), EngineError> {
    let m = ManipulatedGame::new(base, threat)?;
    let extorted = threat.roles.extorted;
    let accept_eq = m.accept_equilibrium()?;
    report.accept_equilibrium = accept_eq.clone();
    let decline_eq = match m.decline_equilibrium() {
        Ok(eq) => eq,
        Err(EngineError::NonUniqueSubgame { count, .. }) => {
            report.diagnostics.push(diag(
                Condition::Theorem1,
                false,
                format!("decline game has {count} pure equilibria; extorted player declines"),
            ));
            report.decision = Some(Decision::Decline);
            report.success = Some(false);
            report.feasible = false;
            return Ok(());
        }
        Err(err) => return Err(err),
    };
    report.decline_equilibrium = decline_eq.clone();
    let accept = m.accept.u(&accept_eq, extorted).clone();
    let decline = m.decline.u(&decline_eq, extorted).clone();
    let decision = spe_decision(&m)?;
    report.diagnostics.push(diag(
        Condition::Theorem1,
        decision == Decision::Accept,
        format!("extorted player's payoff: accept {accept} vs decline {decline}"),
    ));
    report.extorted_payoffs = Some(SubgamePayoffs { accept, decline });
    report.decision = Some(decision);
    report.success = Some(decision == Decision::Accept);

    if threat.roles.extortioner().is_some() {
        let worth = worthwhile_for_extortioner(&m)?;
        report.diagnostics.push(diag(
            Condition::Worthwhile,
            worth.holds,
            format!(
                "extortioner's payoff: accept {} vs decline {}",
                worth.accept_payoff, worth.decline_payoff
            ),
        ));
        report.worthwhile = Some(worth.holds);
        report.extortioner_payoffs = Some(SubgamePayoffs {
            accept: worth.accept_payoff,
            decline: worth.decline_payoff,
        });
    }
    Ok(())
}
