use proptest::prelude::*;

use extortion_core::engine::{
    max_allowed_payment, max_extractable_profit, min_required_payment, Roles, Scenario,
};
use extortion_core::{make_game, Game, Profile, Rational};

/// Random game with 2 or 3 players, 2 or 3 strategies each, small integer payoffs.
fn game_strategy() -> impl Strategy<Value = Game> {
    prop::collection::vec(2usize..=3, 2..=3).prop_flat_map(|sizes| {
        let cells: usize = sizes.iter().product();
        let players = sizes.len();
        prop::collection::vec(prop::collection::vec(-4i64..=4, players), cells)
            .prop_map(move |payoffs| build(&sizes, payoffs))
    })
}

fn build(sizes: &[usize], payoffs: Vec<Vec<i64>>) -> Game {
    let players: Vec<String> = (0..sizes.len()).map(|p| format!("P{p}")).collect();
    let strategies: Vec<Vec<String>> =
        sizes.iter().map(|&n| (0..n).map(|s| format!("s{s}")).collect()).collect();
    let entries = all_profiles(sizes).into_iter().zip(payoffs).map(|(profile, v)| {
        (Profile::new(profile), v.into_iter().map(Rational::integer).collect())
    });
    make_game(players, strategies, entries).unwrap()
}

fn all_profiles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |s| {
                    let mut next = prefix.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    out
}

fn sizes_of(game: &Game) -> Vec<usize> {
    (0..game.num_players()).map(|p| game.num_strategies(p)).collect()
}

/// No player gains by a unilateral deviation, checked by direct comparison.
fn oracle_is_nash(game: &Game, profile: &[usize]) -> bool {
    (0..game.num_players()).all(|p| {
        let own = game.payoff(&Profile::new(profile.to_vec()), p).unwrap();
        (0..game.num_strategies(p)).all(|s| {
            let mut dev = profile.to_vec();
            dev[p] = s;
            game.payoff(&Profile::new(dev), p).unwrap() <= own
        })
    })
}

fn two_by_two() -> impl Strategy<Value = Game> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, 2), 4).prop_map(|p| build(&[2, 2], p))
}

proptest! {
    #[test]
    fn equilibria_admit_no_profitable_deviation(game in game_strategy()) {
        let found = game.pure_nash_equilibria();
        let expected: Vec<Profile> = all_profiles(&sizes_of(&game))
            .into_iter()
            .filter(|p| oracle_is_nash(&game, p))
            .map(Profile::new)
            .collect();
        prop_assert_eq!(&found, &expected);
        for p in game.profiles() {
            prop_assert_eq!(game.is_pure_nash(&p), oracle_is_nash(&game, &p.0));
        }
    }

    #[test]
    fn unique_iff_exactly_one(game in game_strategy()) {
        let count = game.pure_nash_equilibria().len();
        prop_assert_eq!(game.unique_pure_nash().is_some(), count == 1);
    }

    #[test]
    fn positive_affine_maps_preserve_equilibria(
        game in game_strategy(),
        scales in prop::collection::vec(1i64..=5, 3),
        shifts in prop::collection::vec(-7i64..=7, 3),
        denominator in 1i64..=4,
    ) {
        let mapped = game.map_payoffs(|_, player, x| {
            x * &Rational::new(scales[player], denominator).unwrap() + Rational::integer(shifts[player])
        });
        prop_assert_eq!(game.pure_nash_equilibria(), mapped.pure_nash_equilibria());
    }

    #[test]
    fn best_responses_are_nonempty_and_strict_iff_single(game in game_strategy(), pick in any::<prop::sample::Index>()) {
        let profiles: Vec<Profile> = game.profiles().collect();
        let others = pick.get(&profiles);
        for player in 0..game.num_players() {
            let br = game.best_responses(player, others).unwrap();
            prop_assert!(!br.strategies.is_empty());
            prop_assert_eq!(br.strict, br.strategies.len() == 1);
            prop_assert_eq!(br.unique().is_some(), br.strict);
            let best = game.payoff(&others.with(player, br.strategies[0]), player).unwrap();
            for s in 0..game.num_strategies(player) {
                let v = game.payoff(&others.with(player, s), player).unwrap();
                prop_assert!(v <= best);
                prop_assert_eq!(v == best, br.strategies.contains(&s));
            }
        }
    }

    #[test]
    fn fee_and_payment_bounds_are_interdependent(
        game in two_by_two(),
        extorted in 0usize..2,
        fee_num in 1i64..=40,
        pay_num in 1i64..=40,
    ) {
        let Some(eq) = game.unique_pure_nash() else { return Ok(()) };
        let roles = Roles::for_scenario(Scenario::OnePlayerExternal, extorted);
        let target = 1 - eq.strategy(extorted);
        let Ok(c2_min) = min_required_payment(&game, extorted, target) else { return Ok(()) };
        let c2_min = c2_min.value;
        let fee = Rational::new(fee_num, 4).unwrap();
        let payment = &c2_min + Rational::new(pay_num, 4).unwrap();
        let fee_ok = max_extractable_profit(&game, &roles, target, &payment)
            .map(|b| b.admits(&fee))
            .unwrap_or(false);
        let payment_ok = max_allowed_payment(&game, &roles, target, &fee)
            .map(|b| b.admits(&payment))
            .unwrap_or(false);
        prop_assert_eq!(fee_ok, payment_ok);
    }
}
