use thiserror::Error;

use crate::engine::Condition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("floating-point literal `{0}`; use p/q")]
    FloatLiteral(String),
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("a game needs at least one player")]
    NoPlayers,
    #[error("player `{player}` has {count} strategies; at least 2 are required")]
    TooFewStrategies { player: String, count: usize },
    #[error("{expected} strategy lists given for {found} players")]
    StrategyListMismatch { expected: usize, found: usize },
    #[error("duplicate {scope} label `{label}`")]
    DuplicateLabel { scope: String, label: String },
    #[error("duplicate payoff entry for profile {0:?}")]
    DuplicateProfile(Vec<usize>),
    #[error("incomplete payoff tensor: {missing} of {total} profiles have no entry")]
    IncompletePayoffTensor { missing: usize, total: usize },
    #[error("payoff vector has {found} entries, expected one per player ({expected})")]
    PayoffArity { expected: usize, found: usize },
    #[error("profile {0:?} is out of range")]
    ProfileOutOfRange(Vec<usize>),
    #[error("player index {player} is out of range for a {players}-player game")]
    PlayerOutOfRange { player: usize, players: usize },
    #[error("strategy index {strategy} is out of range for player {player}")]
    StrategyOutOfRange { player: usize, strategy: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("binding threats are defined for two-player base games; this game has {players} players")]
    NotTwoPlayer { players: usize },
    #[error("invalid binding threat: {0}")]
    InvalidThreat(String),
    #[error("base game has {count} pure Nash equilibria; exactly one is required")]
    NoUniqueEquilibrium { count: usize },
    #[error("target strategy must differ from the recipient's base-equilibrium strategy")]
    TargetIsEquilibriumStrategy,
    #[error("degenerate game: {detail}")]
    Degenerate { condition: Condition, detail: String },
    #[error("the {subgame} game has {count} pure Nash equilibria; equilibrium selection is ambiguous")]
    NonUniqueSubgame { subgame: &'static str, count: usize },
    #[error("enumeration contradicts the predicted decline equilibrium: {0}")]
    UniquenessContradiction(String),
    #[error("infeasible: {detail}")]
    Infeasible { condition: Condition, detail: String },
    #[error("inconsistent feasibility verdicts: {0}")]
    Inconsistent(String),
}

impl EngineError {
    /// Short label naming the condition that failed.
    pub fn label(&self) -> &'static str {
        match self {
            EngineError::Game(_) => "game",
            EngineError::NotTwoPlayer { .. } => "two-player",
            EngineError::InvalidThreat(_) | EngineError::TargetIsEquilibriumStrategy => {
                "binding-threat"
            }
            EngineError::NoUniqueEquilibrium { .. } => Condition::Assumption1.label(),
            EngineError::Degenerate { condition, .. } => condition.label(),
            EngineError::Infeasible { condition, .. } => condition.label(),
            EngineError::NonUniqueSubgame { .. } => Condition::Theorem1.label(),
            EngineError::UniquenessContradiction(_) => Condition::DeclineEnumeration.label(),
            EngineError::Inconsistent(_) => Condition::RestrictionI.label(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("record {raw_id}: {source}")]
    Engine {
        raw_id: usize,
        #[source]
        source: EngineError,
    },
    #[error("record {raw_id}: structural predicate ({structural}) disagrees with engine feasibility ({engine}) for player {player}")]
    Disagreement {
        raw_id: usize,
        player: usize,
        structural: bool,
        engine: bool,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(err: serde_json::Error) -> Self {
        FormatError::Malformed(err.to_string())
    }
}

#[derive(Debug, Error)]
pub enum DemoError {
    #[error("unknown demo `{0}`; expected one of concord, asym-concord, internal")]
    Unknown(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("demo `{demo}`: {quantity} is {actual}, expected {expected}")]
    Mismatch {
        demo: String,
        quantity: String,
        expected: String,
        actual: String,
    },
}
