//! Constant hiding through a chain of modulus reductions.
//!
//! The helper method `F(y, count)` folds its argument through the sums of
//! a fixed 13-pair table, from pair `count` down to pair 1. The final
//! modulus is 2+3 = 5, so F can only ever produce 0..=4 — which is why
//! only constants below 5 are hideable. [`hide_constant`] runs the chain
//! backwards to manufacture a call site that evaluates to a wanted
//! constant, and [`render_call`] prints it in the `F(A % B, count)`
//! surface form.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::parser;

/// The fixed pair table embedded in the emitted helper.
///
/// Each pair is (n, n+1); the chain uses the pair sums 5, 11, 23, ...,
/// 24575. The sums are mostly prime but not all (95 = 5*19, 767 = 13*59);
/// the table is treated as literal data, not as a primality rule.
pub const FACTOR_PAIRS: [(u64, u64); 13] = [
    (2, 3),
    (5, 6),
    (11, 12),
    (23, 24),
    (47, 48),
    (95, 96),
    (191, 192),
    (383, 384),
    (767, 768),
    (1535, 1536),
    (3071, 3072),
    (6143, 6144),
    (12287, 12288),
];

/// Exclusive upper bound on hideable constants (the final modulus).
pub const MAX_HIDDEN: u64 = 5;

/// Deepest usable chain (the table has 13 pairs).
pub const MAX_DEPTH: u32 = 13;

/// The pair table as a value, for callers that want to walk it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTable {
    pairs: [(u64, u64); 13],
}

impl FactorTable {
    pub fn pairs(&self) -> &[(u64, u64); 13] {
        &self.pairs
    }

    /// Sum of the pair at 1-based chain index `i`.
    pub fn sum(&self, i: usize) -> u64 {
        let (a, b) = self.pairs[i - 1];
        a + b
    }
}

pub fn factor_table() -> FactorTable {
    FactorTable { pairs: FACTOR_PAIRS }
}

/// A renderable hiding call plus the constant it evaluates to.
///
/// Invariant: `f_eval(base, count) == hidden`, and when `surface_modulus`
/// is `Some(b)` the rendered numerator `base + b` reduces back to `base`
/// under `% b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HidingCall {
    pub base: u64,
    pub surface_modulus: Option<u64>,
    pub count: u32,
    pub hidden: u64,
}

/// Evaluates the chain: fold `y` through `mod (n1+n2)` from pair `count`
/// down to pair 1. The result is always in `[0, 5)`.
pub fn f_eval(y: u64, count: u32) -> Result<u64> {
    if count < 1 || count > MAX_DEPTH {
        return Err(Error::DepthOutOfRange { count });
    }
    let mut y = y;
    for i in (0..count as usize).rev() {
        let (a, b) = FACTOR_PAIRS[i];
        y %= a + b;
    }
    Ok(y)
}

/// Builds a call site that evaluates to `value` through a depth-`count`
/// chain.
///
/// The residue ladder starts at `value` and is lifted pair by pair with
/// seeded random multiples, staying below the next modulus at every rung;
/// a final random multiple of the top modulus may be folded in, since the
/// first reduction strips it. Deterministic for a fixed seed.
pub fn hide_constant(value: u64, count: u32, seed: u64) -> Result<HidingCall> {
    if value >= MAX_HIDDEN {
        return Err(Error::HiddenTooLarge { value });
    }
    if count < 1 || count > MAX_DEPTH {
        return Err(Error::DepthOutOfRange { count });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sums: Vec<u64> = FACTOR_PAIRS.iter().map(|(a, b)| a + b).collect();
    let mut residue = value;
    for i in 0..(count as usize - 1) {
        // residue < sums[i]; lift within [0, sums[i+1]) preserving the chain.
        let headroom = (sums[i + 1] - 1 - residue) / sums[i];
        let lift = rng.gen_range(0..=headroom);
        residue += lift * sums[i];
    }
    let extra = rng.gen_range(0..=2u64);
    let base = residue + extra * sums[count as usize - 1];
    let surface_modulus = surface_modulus_for(base);
    debug_assert_eq!(f_eval(base, count)?, value);
    Ok(HidingCall {
        base,
        surface_modulus,
        count,
        hidden: value,
    })
}

/// Smallest table first-element strictly greater than `base`, if any.
fn surface_modulus_for(base: u64) -> Option<u64> {
    FACTOR_PAIRS.iter().map(|p| p.0).find(|&n1| n1 > base)
}

/// Renders `F(A % B, count)` with `A = base + B`, falling back to
/// `F(base, count)` when the base exceeds every table first-element.
/// The rendered text re-parses to the same base.
pub fn render_call(call: &HidingCall) -> String {
    match call.surface_modulus {
        Some(b) => format!("F({} % {}, {})", call.base + b, b, call.count),
        None => format!("F({}, {})", call.base, call.count),
    }
}

/// Emitted Java source of the helper method, with its statement count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelperSource {
    pub text: String,
    pub statement_count: usize,
}

/// The Java helper implementing the same chain as [`f_eval`], indented
/// for embedding in a generated class. Byte-identical across calls.
pub fn emit_hiding_helper() -> HelperSource {
    let text = r"    private static int F(int y, int count) {
        int[][] y_factors = {
            {2,3}, {5,6}, {11,12}, {23,24}, {47,48}, {95,96}, {191,192},
            {383,384}, {767,768}, {1535,1536}, {3071,3072}, {6143,6144}, {12287,12288}
        };
        for (int i=count;i>0;i--) {
            int y1 = y_factors[i - 1][0] + y_factors[i - 1][1];
            y = y % y1;
        }
        return y;
    }
"
    .to_string();
    let statement_count = parser::count_statements(&text);
    HelperSource {
        text,
        statement_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_the_printed_list() {
        let table = factor_table();
        assert_eq!(table.pairs()[0], (2, 3));
        assert_eq!(table.pairs()[12], (12287, 12288));
        assert_eq!(table.sum(1), 5);
        for (a, b) in table.pairs() {
            assert_eq!(*b, a + 1);
        }
        let sums: Vec<u64> = table.pairs().iter().map(|(a, b)| a + b).collect();
        assert!(sums.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn chain_evaluates_the_known_triple() {
        // All three published call shapes hide the constant 2.
        assert_eq!(f_eval(41 % 23, 2).unwrap(), 2);
        assert_eq!(f_eval(6130 % 3071, 9).unwrap(), 2);
        assert_eq!(f_eval(24560 % 12287, 11).unwrap(), 2);
        // Intermediate ladder for the depth-9 call:
        // 3059 -> 1524 -> 757 -> 374 -> 183 -> 88 -> 41 -> 18 -> 7 -> 2.
        assert_eq!(f_eval(3059, 9).unwrap(), 2);
    }

    #[test]
    fn chain_edges() {
        assert_eq!(f_eval(0, 13).unwrap(), 0);
        assert_eq!(f_eval(18, 2).unwrap(), 2);
        assert!(matches!(f_eval(7, 0), Err(Error::DepthOutOfRange { .. })));
        assert!(matches!(f_eval(7, 14), Err(Error::DepthOutOfRange { .. })));
        for y in 0..2000u64 {
            for count in 1..=13 {
                assert!(f_eval(y, count).unwrap() < MAX_HIDDEN);
            }
        }
    }

    #[test]
    fn hide_constant_round_trips() {
        for value in 0..MAX_HIDDEN {
            for count in 1..=MAX_DEPTH {
                for seed in 0..25u64 {
                    let call = hide_constant(value, count, seed).unwrap();
                    assert_eq!(f_eval(call.base, count).unwrap(), value, "{call:?}");
                    assert_eq!(call.hidden, value);
                }
            }
        }
        assert!(matches!(
            hide_constant(5, 2, 0),
            Err(Error::HiddenTooLarge { .. })
        ));
        assert!(matches!(
            hide_constant(7, 2, 0),
            Err(Error::HiddenTooLarge { .. })
        ));
    }

    #[test]
    fn hide_constant_is_deterministic() {
        for seed in [0u64, 1, 42, 0xdeadbeef] {
            assert_eq!(
                hide_constant(2, 9, seed).unwrap(),
                hide_constant(2, 9, seed).unwrap()
            );
        }
    }

    #[test]
    fn renderer_reproduces_published_shapes() {
        let cases = [
            (18u64, 2u32, "F(41 % 23, 2)"),
            (3059, 9, "F(6130 % 3071, 9)"),
            (12273, 11, "F(24560 % 12287, 11)"),
        ];
        for (base, count, want) in cases {
            let call = HidingCall {
                base,
                surface_modulus: surface_modulus_for(base),
                count,
                hidden: f_eval(base, count).unwrap(),
            };
            assert_eq!(render_call(&call), want);
            assert_eq!(call.hidden, 2);
        }
    }

    #[test]
    fn renderer_falls_back_when_base_exceeds_table() {
        let call = HidingCall {
            base: 20000,
            surface_modulus: surface_modulus_for(20000),
            count: 13,
            hidden: f_eval(20000, 13).unwrap(),
        };
        assert_eq!(call.surface_modulus, None);
        assert_eq!(render_call(&call), format!("F(20000, 13)"));
    }

    #[test]
    fn rendered_numerator_reduces_to_base() {
        for value in 0..MAX_HIDDEN {
            for count in 1..=MAX_DEPTH {
                for seed in 100..140u64 {
                    let call = hide_constant(value, count, seed).unwrap();
                    if let Some(b) = call.surface_modulus {
                        assert!(b > call.base);
                        assert_eq!((call.base + b) % b, call.base);
                    }
                }
            }
        }
    }

    #[test]
    fn helper_text_is_stable_and_carries_the_table() {
        let first = emit_hiding_helper();
        let second = emit_hiding_helper();
        assert_eq!(first, second);
        assert!(first.text.contains("for (int i=count;i>0;i--)"));
        for (a, b) in FACTOR_PAIRS {
            assert!(
                first.text.contains(&format!("{{{},{}}}", a, b)),
                "pair ({a},{b}) missing"
            );
        }
        assert_eq!(first.statement_count, 6);
    }

    /// Seeds pinned to the draws that reproduce the three published call
    /// shapes; they double as goldens for the generator's draw order.
    #[test]
    fn pinned_seeds_reproduce_published_calls() {
        let cases = [
            (2u64, 2u32, 0u64, "F(41 % 23, 2)"),
            (2, 9, 387, "F(6130 % 3071, 9)"),
            (2, 11, 512, "F(24560 % 12287, 11)"),
        ];
        for (value, count, seed, want) in cases {
            let call = hide_constant(value, count, seed).unwrap();
            assert_eq!(render_call(&call), want);
            assert_eq!(f_eval(call.base, count).unwrap(), value);
        }
    }

    /// Mirror of the emitted helper, interpreted straight from its table
    /// literals, as an independent check that text and chain agree.
    #[test]
    fn helper_table_matches_rust_table() {
        let text = emit_hiding_helper().text;
        let row = text
            .lines()
            .filter(|l| l.trim_start().starts_with('{'))
            .collect::<Vec<_>>()
            .join(" ");
        let mut nums = Vec::new();
        let mut cur = String::new();
        for ch in row.chars() {
            if ch.is_ascii_digit() {
                cur.push(ch);
            } else if !cur.is_empty() {
                nums.push(cur.parse::<u64>().unwrap());
                cur.clear();
            }
        }
        if !cur.is_empty() {
            nums.push(cur.parse().unwrap());
        }
        let pairs: Vec<(u64, u64)> = nums.chunks(2).map(|c| (c[0], c[1])).collect();
        assert_eq!(pairs, FACTOR_PAIRS.to_vec());
    }
}
