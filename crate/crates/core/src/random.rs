//! Seeded random generation of expression trees and tangent vectors, used
//! by the property suites and the verification command.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expr::{CoordRole, Expr, UnaryFn};

/// Knobs for the tree generator.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_depth: u32,
    /// Highest coordinate index drawn.
    pub dof: u32,
    /// Include acceleration symbols.
    pub accelerations: bool,
    /// Include conj() wrappers and the function heads.
    pub functions: bool,
    pub params: Vec<&'static str>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            dof: 2,
            accelerations: false,
            functions: true,
            params: vec!["a", "b", "m", "g"],
        }
    }
}

/// Deterministic random tree for a seed.
pub fn random_expr_seeded(seed: u64, config: &GenConfig) -> Expr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_expr(&mut rng, config)
}

pub fn random_expr(rng: &mut ChaCha8Rng, config: &GenConfig) -> Expr {
    gen_expr(rng, config, config.max_depth)
}

fn leaf(rng: &mut ChaCha8Rng, config: &GenConfig) -> Expr {
    match rng.gen_range(0..10u32) {
        0 | 1 => Expr::int(rng.gen_range(-3..=4)),
        2 => Expr::ratio(rng.gen_range(1..=5), rng.gen_range(2..=4)),
        3 => Expr::i(),
        4 => {
            let k = rng.gen_range(0..config.params.len());
            Expr::param(config.params[k])
        }
        5 => Expr::Time,
        _ => {
            let idx = rng.gen_range(1..=config.dof);
            let roles: &[CoordRole] = if config.accelerations {
                &[
                    CoordRole::Z,
                    CoordRole::ZBar,
                    CoordRole::ZDot,
                    CoordRole::ZBarDot,
                    CoordRole::ZDdot,
                    CoordRole::ZBarDdot,
                ]
            } else {
                &[
                    CoordRole::Z,
                    CoordRole::ZBar,
                    CoordRole::ZDot,
                    CoordRole::ZBarDot,
                ]
            };
            Expr::coord(roles[rng.gen_range(0..roles.len())], idx)
        }
    }
}

fn gen_expr(rng: &mut ChaCha8Rng, config: &GenConfig, depth: u32) -> Expr {
    if depth == 0 {
        return leaf(rng, config);
    }
    let choice = if config.functions {
        rng.gen_range(0..12u32)
    } else {
        rng.gen_range(0..8u32)
    };
    match choice {
        0 | 1 => {
            let k = rng.gen_range(2..=3);
            Expr::Sum((0..k).map(|_| gen_expr(rng, config, depth - 1)).collect())
        }
        2 | 3 => {
            let k = rng.gen_range(2..=3);
            Expr::Product((0..k).map(|_| gen_expr(rng, config, depth - 1)).collect())
        }
        4 => {
            let base = gen_expr(rng, config, depth - 1);
            let exp = match rng.gen_range(0..6u32) {
                0 => Expr::int(-2),
                1 => Expr::int(-1),
                2 => Expr::int(2),
                3 => Expr::int(3),
                4 => Expr::ratio(1, 2),
                _ => Expr::ratio(3, 2),
            };
            Expr::pow(base, exp)
        }
        5 => -gen_expr(rng, config, depth - 1),
        6 => gen_expr(rng, config, depth - 1) / gen_expr(rng, config, depth - 1),
        7 => gen_expr(rng, config, depth - 1),
        8 => Expr::conj(gen_expr(rng, config, depth - 1)),
        _ => {
            let f = [UnaryFn::Sqrt, UnaryFn::Sin, UnaryFn::Cos, UnaryFn::Exp, UnaryFn::Ln]
                [rng.gen_range(0..5usize)];
            Expr::func(f, gen_expr(rng, config, depth - 1))
        }
    }
}

/// Random tangent-vector coefficients: 2n simple expressions.
pub fn random_tangent_coeffs(rng: &mut ChaCha8Rng, n: u32) -> Vec<Expr> {
    let config = GenConfig {
        max_depth: 2,
        dof: n,
        accelerations: false,
        functions: false,
        params: vec!["a", "b"],
    };
    (0..2 * n).map(|_| gen_expr(rng, &config, 2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::default();
        for seed in 0..32u64 {
            assert_eq!(
                random_expr_seeded(seed, &cfg),
                random_expr_seeded(seed, &cfg)
            );
        }
    }

    #[test]
    fn depth_zero_yields_leaves() {
        let cfg = GenConfig {
            max_depth: 0,
            ..GenConfig::default()
        };
        for seed in 0..16u64 {
            let e = random_expr_seeded(seed, &cfg);
            assert!(e.children().is_empty());
        }
    }
}
