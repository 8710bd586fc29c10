//! Finite normal-form games with exact payoffs and pure-strategy solution
//! concepts.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::rational::Rational;

/// One strategy index per player, ordered by player index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile(pub Vec<usize>);

impl Profile {
    pub fn new(strategies: impl Into<Vec<usize>>) -> Self {
        Profile(strategies.into())
    }

    pub fn strategy(&self, player: usize) -> usize {
        self.0[player]
    }

    /// Copy of this profile with `player` switched to `strategy`.
    pub fn with(&self, player: usize, strategy: usize) -> Profile {
        let mut next = self.0.clone();
        next[player] = strategy;
        Profile(next)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Strategies maximizing a player's payoff against fixed opponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    pub strategies: Vec<usize>,
    /// True when the maximizer is unique.
    pub strict: bool,
}

impl BestResponse {
    pub fn unique(&self) -> Option<usize> {
        if self.strict {
            Some(self.strategies[0])
        } else {
            None
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Game {
    player_names: Vec<String>,
    strategy_names: Vec<Vec<String>>,
    /// Row-major over profiles (last player varies fastest), one vector per profile.
    payoffs: Vec<Vec<Rational>>,
}

fn check_distinct<'a>(scope: &str, labels: impl IntoIterator<Item = &'a String>) -> Result<(), GameError> {
    let mut seen = HashSet::new();
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(GameError::DuplicateLabel {
                scope: scope.to_string(),
                label: label.clone(),
            });
        }
    }
    Ok(())
}

/// Builds a validated game from a complete list of payoff entries.
pub fn make_game(
    player_names: Vec<String>,
    strategy_names: Vec<Vec<String>>,
    payoff_entries: impl IntoIterator<Item = (Profile, Vec<Rational>)>,
) -> Result<Game, GameError> {
    if player_names.is_empty() {
        return Err(GameError::NoPlayers);
    }
    if strategy_names.len() != player_names.len() {
        return Err(GameError::StrategyListMismatch {
            expected: strategy_names.len(),
            found: player_names.len(),
        });
    }
    check_distinct("player", &player_names)?;
    for (name, strategies) in player_names.iter().zip(&strategy_names) {
        if strategies.len() < 2 {
            return Err(GameError::TooFewStrategies {
                player: name.clone(),
                count: strategies.len(),
            });
        }
        check_distinct(&format!("strategy of player `{name}`"), strategies)?;
    }

    let total: usize = strategy_names.iter().map(Vec::len).product();
    let mut slots: Vec<Option<Vec<Rational>>> = vec![None; total];
    let mut game = Game {
        player_names,
        strategy_names,
        payoffs: Vec::new(),
    };
    for (profile, vector) in payoff_entries {
        let index = game.index_of(&profile)?;
        if vector.len() != game.num_players() {
            return Err(GameError::PayoffArity {
                expected: game.num_players(),
                found: vector.len(),
            });
        }
        if slots[index].is_some() {
            return Err(GameError::DuplicateProfile(profile.0));
        }
        slots[index] = Some(vector);
    }
    let missing = slots.iter().filter(|s| s.is_none()).count();
    if missing > 0 {
        return Err(GameError::IncompletePayoffTensor { missing, total });
    }
    game.payoffs = slots.into_iter().flatten().collect();
    Ok(game)
}

impl Game {
    /// Two-player game from a table indexed `[row][column]` of `(row payoff, column payoff)`.
    pub fn bimatrix(
        players: [&str; 2],
        rows: &[&str],
        columns: &[&str],
        cells: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Game, GameError> {
        if cells.len() != rows.len() || cells.iter().any(|row| row.len() != columns.len()) {
            let provided: usize = cells.iter().map(Vec::len).sum();
            return Err(GameError::IncompletePayoffTensor {
                missing: (rows.len() * columns.len()).saturating_sub(provided),
                total: rows.len() * columns.len(),
            });
        }
        let entries = cells.into_iter().enumerate().flat_map(|(r, row)| {
            row.into_iter()
                .enumerate()
                .map(move |(c, (a, b))| (Profile::new(vec![r, c]), vec![a, b]))
        });
        make_game(
            players.iter().map(|s| s.to_string()).collect(),
            vec![
                rows.iter().map(|s| s.to_string()).collect(),
                columns.iter().map(|s| s.to_string()).collect(),
            ],
            entries,
        )
    }

    /// Integer-payoff shorthand for [`Game::bimatrix`].
    pub fn integer_bimatrix(
        players: [&str; 2],
        rows: &[&str],
        columns: &[&str],
        cells: &[&[(i64, i64)]],
    ) -> Result<Game, GameError> {
        let cells = cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(a, b)| (Rational::integer(a), Rational::integer(b)))
                    .collect()
            })
            .collect();
        Game::bimatrix(players, rows, columns, cells)
    }

    pub fn num_players(&self) -> usize {
        self.player_names.len()
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.strategy_names[player].len()
    }

    pub fn player_names(&self) -> &[String] {
        &self.player_names
    }

    pub fn player_name(&self, player: usize) -> &str {
        &self.player_names[player]
    }

    pub fn strategy_names(&self, player: usize) -> &[String] {
        &self.strategy_names[player]
    }

    pub fn strategy_name(&self, player: usize, strategy: usize) -> &str {
        &self.strategy_names[player][strategy]
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.player_names.iter().position(|p| p == name)
    }

    pub fn strategy_index(&self, player: usize, name: &str) -> Option<usize> {
        self.strategy_names
            .get(player)?
            .iter()
            .position(|s| s == name)
    }

    pub fn check_player(&self, player: usize) -> Result<(), GameError> {
        if player < self.num_players() {
            Ok(())
        } else {
            Err(GameError::PlayerOutOfRange {
                player,
                players: self.num_players(),
            })
        }
    }

    pub fn check_strategy(&self, player: usize, strategy: usize) -> Result<(), GameError> {
        self.check_player(player)?;
        if strategy < self.num_strategies(player) {
            Ok(())
        } else {
            Err(GameError::StrategyOutOfRange { player, strategy })
        }
    }

    fn index_of(&self, profile: &Profile) -> Result<usize, GameError> {
        if profile.len() != self.num_players() {
            return Err(GameError::ProfileOutOfRange(profile.0.clone()));
        }
        let mut index = 0;
        for (strategy, names) in profile.0.iter().zip(&self.strategy_names) {
            if *strategy >= names.len() {
                return Err(GameError::ProfileOutOfRange(profile.0.clone()));
            }
            index = index * names.len() + strategy;
        }
        Ok(index)
    }

    /// All pure strategy profiles in row-major order.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let sizes: Vec<usize> = self.strategy_names.iter().map(Vec::len).collect();
        let total = self.payoffs.len();
        (0..total).map(move |mut flat| {
            let mut strategies = vec![0; sizes.len()];
            for (slot, size) in strategies.iter_mut().zip(&sizes).rev() {
                *slot = flat % size;
                flat /= size;
            }
            Profile(strategies)
        })
    }

    pub fn payoff(&self, profile: &Profile, player: usize) -> Result<&Rational, GameError> {
        self.check_player(player)?;
        let index = self.index_of(profile)?;
        Ok(&self.payoffs[index][player])
    }

    pub fn payoff_vector(&self, profile: &Profile) -> Result<&[Rational], GameError> {
        let index = self.index_of(profile)?;
        Ok(&self.payoffs[index])
    }

    /// Unchecked payoff lookup for internal callers with validated profiles.
    pub(crate) fn u(&self, profile: &Profile, player: usize) -> &Rational {
        &self.payoffs[self.index_of(profile).expect("validated profile")][player]
    }

    /// Copy of this game with every payoff replaced by `f(profile, player, payoff)`.
    pub fn map_payoffs(&self, mut f: impl FnMut(&Profile, usize, &Rational) -> Rational) -> Game {
        let payoffs = self
            .profiles()
            .zip(&self.payoffs)
            .map(|(profile, vector)| {
                vector
                    .iter()
                    .enumerate()
                    .map(|(player, value)| f(&profile, player, value))
                    .collect()
            })
            .collect();
        Game {
            player_names: self.player_names.clone(),
            strategy_names: self.strategy_names.clone(),
            payoffs,
        }
    }

    /// Best responses of `player` to the other entries of `others`; the
    /// player's own entry in `others` is ignored.
    pub fn best_responses(&self, player: usize, others: &Profile) -> Result<BestResponse, GameError> {
        self.check_player(player)?;
        let base = others.with(player, 0);
        self.index_of(&base)?;
        let mut best: Option<&Rational> = None;
        let mut strategies = Vec::new();
        for strategy in 0..self.num_strategies(player) {
            let value = self.u(&base.with(player, strategy), player);
            match best {
                Some(current) if value < current => {}
                Some(current) if value == current => strategies.push(strategy),
                _ => {
                    best = Some(value);
                    strategies.clear();
                    strategies.push(strategy);
                }
            }
        }
        let strict = strategies.len() == 1;
        Ok(BestResponse { strategies, strict })
    }

    /// True when no player gains by a unilateral deviation from `profile`.
    pub fn is_pure_nash(&self, profile: &Profile) -> bool {
        (0..self.num_players()).all(|player| {
            let own = self.u(profile, player);
            (0..self.num_strategies(player)).all(|s| self.u(&profile.with(player, s), player) <= own)
        })
    }

    /// Every pure Nash equilibrium, found by exhaustive enumeration.
    pub fn pure_nash_equilibria(&self) -> Vec<Profile> {
        self.profiles().filter(|p| self.is_pure_nash(p)).collect()
    }

    pub fn unique_pure_nash(&self) -> Option<Profile> {
        let mut equilibria = self.pure_nash_equilibria();
        if equilibria.len() == 1 {
            equilibria.pop()
        } else {
            None
        }
    }

    /// The strategy that is the strict best response to every opponent profile.
    pub fn dominant_strategy(&self, player: usize) -> Result<Option<usize>, GameError> {
        self.check_player(player)?;
        let mut candidate = None;
        for others in self.profiles().filter(|p| p.strategy(player) == 0) {
            match self.best_responses(player, &others)?.unique() {
                None => return Ok(None),
                Some(s) if candidate.is_some_and(|c| c != s) => return Ok(None),
                Some(s) => candidate = Some(s),
            }
        }
        Ok(candidate)
    }
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (profile, vector) in self.profiles().zip(&self.payoffs) {
            map.entry(&profile, vector);
        }
        map.finish()
    }
}
