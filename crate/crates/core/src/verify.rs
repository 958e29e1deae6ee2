//! Self-check suites: enumerative bijection checks, store-vs-reference
//! equivalence under randomized workloads, and hide/eval round trips.
//!
//! Suites enumerate cases in ascending order and stop at the first
//! violation, so a reported counterexample is minimal for its suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hiding;
use crate::index_maps::{self, AffineMap, Dim2, Half};
use crate::store::{ElementKind, RestructureOp, Store, Value};

/// Result of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn pass(name: &'static str, cases: u64) -> Self {
        SuiteOutcome {
            name,
            cases,
            counterexample: None,
        }
    }

    fn fail(name: &'static str, cases: u64, counterexample: String) -> Self {
        SuiteOutcome {
            name,
            cases,
            counterexample: Some(counterexample),
        }
    }
}

/// Anything that behaves like a restructured store. The production
/// [`Store`] implements it; tests implement deliberately broken variants
/// to prove the equivalence checker actually detects violations.
pub trait IndexedStore {
    fn set(&mut self, coords: &[usize], value: Value) -> crate::Result<()>;
    fn get(&self, coords: &[usize]) -> crate::Result<Value>;
    fn length(&self) -> usize;
}

impl IndexedStore for Store {
    fn set(&mut self, coords: &[usize], value: Value) -> crate::Result<()> {
        Store::set(self, coords, value)
    }

    fn get(&self, coords: &[usize]) -> crate::Result<Value> {
        Store::get(self, coords)
    }

    fn length(&self) -> usize {
        Store::length(self)
    }
}

/// Every split location is distinct and exactly fills both sub-arrays,
/// and the merge mapping of the two halves is its inverse, for all sizes
/// up to `max_size`.
pub fn split_bijection(max_size: usize) -> SuiteOutcome {
    const NAME: &str = "split-bijection";
    let mut cases = 0u64;
    for size in 1..=max_size {
        let (first_len, second_len) = match index_maps::split_sizes(size) {
            Ok(v) => v,
            Err(e) => return SuiteOutcome::fail(NAME, cases, format!("split_sizes({size}): {e}")),
        };
        if first_len + second_len != size {
            return SuiteOutcome::fail(
                NAME,
                cases,
                format!("split_sizes({size}) = ({first_len}, {second_len}) does not sum to {size}"),
            );
        }
        let mut first = vec![false; first_len];
        let mut second = vec![false; second_len];
        for pos in 0..size {
            cases += 1;
            let loc = match index_maps::split_locate(pos, size) {
                Ok(loc) => loc,
                Err(e) => {
                    return SuiteOutcome::fail(NAME, cases, format!("split_locate({pos}, {size}): {e}"))
                }
            };
            let slot = match loc.half {
                Half::First => first.get_mut(loc.offset),
                Half::Second => second.get_mut(loc.offset),
            };
            match slot {
                Some(seen) if !*seen => *seen = true,
                Some(_) => {
                    return SuiteOutcome::fail(
                        NAME,
                        cases,
                        format!("duplicate location {loc:?} at pos {pos}, size {size}"),
                    )
                }
                None => {
                    return SuiteOutcome::fail(
                        NAME,
                        cases,
                        format!("offset {} overruns sub-array at pos {pos}, size {size}", loc.offset),
                    )
                }
            }
            // Merging the halves must be the exact inverse.
            match index_maps::merge_locate(pos, first_len, second_len) {
                Ok((source, offset)) => {
                    let same = offset == loc.offset
                        && matches!(
                            (source, loc.half),
                            (index_maps::MergeSource::A, Half::First)
                                | (index_maps::MergeSource::B, Half::Second)
                        );
                    if !same {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("merge is not the inverse of split at pos {pos}, size {size}"),
                        );
                    }
                }
                Err(e) => {
                    return SuiteOutcome::fail(NAME, cases, format!("merge_locate({pos}): {e}"))
                }
            }
        }
        if !first.iter().all(|&s| s) || !second.iter().all(|&s| s) {
            return SuiteOutcome::fail(NAME, cases, format!("split of size {size} leaves holes"));
        }
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Merge mapping is injective and covers both index ranges for all
/// source lengths up to `max_len`.
pub fn merge_bijection(max_len: usize) -> SuiteOutcome {
    const NAME: &str = "merge-bijection";
    let mut cases = 0u64;
    for len_a in 0..=max_len {
        for len_b in 0..=max_len {
            let mut seen_a = vec![false; len_a];
            let mut seen_b = vec![false; len_b];
            for pos in 0..len_a + len_b {
                cases += 1;
                let (source, offset) = match index_maps::merge_locate(pos, len_a, len_b) {
                    Ok(v) => v,
                    Err(e) => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("merge_locate({pos}, {len_a}, {len_b}): {e}"),
                        )
                    }
                };
                let slot = match source {
                    index_maps::MergeSource::A => seen_a.get_mut(offset),
                    index_maps::MergeSource::B => seen_b.get_mut(offset),
                };
                match slot {
                    Some(seen) if !*seen => *seen = true,
                    _ => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!(
                                "merge_locate({pos}, {len_a}, {len_b}) = ({source:?}, {offset}) duplicates or overruns"
                            ),
                        )
                    }
                }
            }
            if !seen_a.iter().all(|&s| s) || !seen_b.iter().all(|&s| s) {
                return SuiteOutcome::fail(
                    NAME,
                    cases,
                    format!("merge of {len_a}+{len_b} leaves holes"),
                );
            }
        }
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Fold and flatten are mutually inverse and row-major: exhaustive over
/// every shape up to 4096 cells, plus full sweeps of deterministically
/// sampled and fixed large shapes up to 100000 cells.
pub fn fold_flatten_inverse(seed: u64) -> SuiteOutcome {
    const NAME: &str = "fold-flatten-inverse";
    const EXHAUSTIVE_CELLS: usize = 4096;
    const LARGE_CELLS: usize = 100_000;
    let mut cases = 0u64;
    let mut shapes: Vec<Dim2> = Vec::new();
    for rows in 1..=EXHAUSTIVE_CELLS {
        for cols in 1..=EXHAUSTIVE_CELLS / rows {
            shapes.push(Dim2 { rows, cols });
        }
    }
    for dims in [
        Dim2 { rows: 500, cols: 200 },
        Dim2 { rows: 316, cols: 317 },
        Dim2 { rows: 1, cols: LARGE_CELLS },
        Dim2 { rows: LARGE_CELLS, cols: 1 },
    ] {
        shapes.push(dims);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..48 {
        let rows = rng.gen_range(1..=1000);
        let cols = rng.gen_range(1..=LARGE_CELLS / rows);
        shapes.push(Dim2 { rows, cols });
    }
    for dims in shapes {
        // Independent row-major enumeration alongside the mapping.
        let mut pos = 0usize;
        for row in 0..dims.rows {
            for col in 0..dims.cols {
                cases += 1;
                match index_maps::fold_locate(pos, dims) {
                    Ok(rc) if rc == (row, col) => {}
                    other => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("fold_locate({pos}, {dims:?}) = {other:?}, want ({row}, {col})"),
                        )
                    }
                }
                match index_maps::flatten_locate(row, col, dims) {
                    Ok(p) if p == pos => {}
                    other => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!(
                                "flatten_locate({row}, {col}, {dims:?}) = {other:?}, want {pos}"
                            ),
                        )
                    }
                }
                pos += 1;
            }
        }
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Affine validity coincides with the image being a permutation, and
/// inverses compose to the identity, for the known fixed maps plus
/// `random_maps` seeded random valid maps.
pub fn affine_permutation(random_maps: usize, seed: u64) -> SuiteOutcome {
    const NAME: &str = "affine-permutation";
    let mut cases = 0u64;
    let known_good = AffineMap { k: 3, b: 0, n: 100 };
    let known_bad = AffineMap { k: 2, b: 0, n: 100 };
    if !index_maps::affine_valid(known_good) {
        return SuiteOutcome::fail(NAME, cases, format!("{known_good:?} should be valid"));
    }
    if index_maps::affine_valid(known_bad) {
        return SuiteOutcome::fail(NAME, cases, format!("{known_bad:?} should be rejected"));
    }
    if index_maps::affine_inverse(known_bad).is_ok() {
        return SuiteOutcome::fail(NAME, cases, format!("{known_bad:?} must not invert"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut maps = vec![known_good];
    while maps.len() < random_maps + 1 {
        let n = rng.gen_range(1..=1000);
        let map = AffineMap {
            k: rng.gen_range(1..=3 * n),
            b: rng.gen_range(0..=2 * n),
            n,
        };
        if index_maps::affine_valid(map) {
            maps.push(map);
        }
    }
    for map in maps {
        let inverse = match index_maps::affine_inverse(map) {
            Ok(inv) => inv,
            Err(e) => return SuiteOutcome::fail(NAME, cases, format!("inverse of {map:?}: {e}")),
        };
        let mut seen = vec![false; map.n];
        for i in 0..map.n {
            cases += 1;
            let image = match index_maps::affine_index(i, map) {
                Ok(v) => v,
                Err(e) => {
                    return SuiteOutcome::fail(NAME, cases, format!("affine_index({i}, {map:?}): {e}"))
                }
            };
            if seen[image] {
                return SuiteOutcome::fail(
                    NAME,
                    cases,
                    format!("{map:?} collides at i = {i} (image {image})"),
                );
            }
            seen[image] = true;
            let back = index_maps::affine_index(image, inverse).unwrap_or(usize::MAX);
            if back != i {
                return SuiteOutcome::fail(
                    NAME,
                    cases,
                    format!("{map:?} inverse round trip fails at i = {i}: got {back}"),
                );
            }
        }
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Hiding calls evaluate back to the constant they hide, and the surface
/// form reduces to the generated base, across every value, depth, and
/// `seeds_per_case` seeds.
pub fn hide_roundtrip(seeds_per_case: u64) -> SuiteOutcome {
    const NAME: &str = "hide-roundtrip";
    let mut cases = 0u64;
    for value in 0..hiding::MAX_HIDDEN {
        for count in 1..=hiding::MAX_DEPTH {
            for seed in 0..seeds_per_case {
                cases += 1;
                let call = match hiding::hide_constant(value, count, seed) {
                    Ok(call) => call,
                    Err(e) => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("hide_constant({value}, {count}, {seed}): {e}"),
                        )
                    }
                };
                let evaluated = hiding::f_eval(call.base, count).unwrap_or(u64::MAX);
                if evaluated != value {
                    return SuiteOutcome::fail(
                        NAME,
                        cases,
                        format!("f_eval({}, {count}) = {evaluated}, want {value}", call.base),
                    );
                }
                if let Some(b) = call.surface_modulus {
                    if b <= call.base || (call.base + b) % b != call.base {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("surface form of {call:?} does not reduce to its base"),
                        );
                    }
                }
            }
        }
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Randomized set/get workload against a plain flat reference array
/// (2-D reference for Flattened), for every op and kind over `sizes`,
/// plus Split at 100000.
pub fn store_reference_equivalence(sizes: &[usize], ops_per_case: u64, seed: u64) -> SuiteOutcome {
    const NAME: &str = "store-reference-equivalence";
    let mut cases = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for op in RestructureOp::ALL {
        for kind in ElementKind::ALL {
            for &size in sizes {
                let extents = match op {
                    RestructureOp::Flattened => {
                        let dims = index_maps::fold_dims(size, None).expect("size >= 1");
                        vec![dims.rows, dims.cols]
                    }
                    _ => vec![size],
                };
                let mut store = match Store::new(op, kind, &extents) {
                    Ok(store) => store,
                    Err(e) => {
                        return SuiteOutcome::fail(
                            NAME,
                            cases,
                            format!("Store::new({op:?}, {kind:?}, {extents:?}): {e}"),
                        )
                    }
                };
                let label = format!("{op:?}/{kind:?} extents {extents:?}");
                if let Some(fail) =
                    drive_store(&mut store, op, kind, &extents, size, ops_per_case, &mut rng)
                {
                    return SuiteOutcome::fail(NAME, cases, format!("{label}: {fail}"));
                }
                cases += ops_per_case;
            }
        }
    }
    for kind in ElementKind::ALL {
        let mut store = Store::new(RestructureOp::Split, kind, &[100_000]).expect("valid size");
        if let Some(fail) = drive_store(
            &mut store,
            RestructureOp::Split,
            kind,
            &[100_000],
            100_000,
            ops_per_case,
            &mut rng,
        ) {
            return SuiteOutcome::fail(NAME, cases, format!("Split/{kind:?} at 100000: {fail}"));
        }
        cases += ops_per_case;
    }
    SuiteOutcome::pass(NAME, cases)
}

/// Drives one store against its flat reference; `size` is the logical
/// 1-D extent (for Flattened it only scales the workload, the reference
/// is rows x cols). Returns the first divergence found.
pub fn drive_store(
    store: &mut dyn IndexedStore,
    op: RestructureOp,
    kind: ElementKind,
    extents: &[usize],
    size: usize,
    ops: u64,
    rng: &mut ChaCha8Rng,
) -> Option<String> {
    match op {
        RestructureOp::Flattened => {
            let (rows, cols) = (extents[0], extents[1]);
            let mut reference = vec![vec![kind.default_value(); cols]; rows];
            if store.length() != rows * cols {
                return Some(format!(
                    "length() = {}, want {}",
                    store.length(),
                    rows * cols
                ));
            }
            for step in 0..ops {
                let coords = [rng.gen_range(0..rows), rng.gen_range(0..cols)];
                if rng.gen_bool(0.5) {
                    let value = random_value(kind, rng);
                    if let Err(e) = store.set(&coords, value.clone()) {
                        return Some(format!("step {step}: set{coords:?} failed: {e}"));
                    }
                    reference[coords[0]][coords[1]] = value;
                    let probe = [rng.gen_range(0..rows), rng.gen_range(0..cols)];
                    if let Some(fail) =
                        expect_value(store, &probe, &reference[probe[0]][probe[1]], step)
                    {
                        return Some(fail);
                    }
                } else if let Some(fail) =
                    expect_value(store, &coords, &reference[coords[0]][coords[1]], step)
                {
                    return Some(fail);
                }
                if step % 64 == 0 {
                    let oob = [rows, rng.gen_range(0..cols)];
                    if store.get(&oob).is_ok() {
                        return Some(format!("step {step}: out-of-range get{oob:?} succeeded"));
                    }
                }
            }
        }
        _ => {
            let mut reference = vec![kind.default_value(); size];
            if op == RestructureOp::Split && store.length() != size {
                return Some(format!("length() = {}, want {size}", store.length()));
            }
            for step in 0..ops {
                let pos = rng.gen_range(0..size);
                if rng.gen_bool(0.5) {
                    let value = random_value(kind, rng);
                    if let Err(e) = store.set(&[pos], value.clone()) {
                        return Some(format!("step {step}: set[{pos}] failed: {e}"));
                    }
                    reference[pos] = value;
                    let probe = rng.gen_range(0..size);
                    if let Some(fail) = expect_value(store, &[probe], &reference[probe], step) {
                        return Some(fail);
                    }
                } else if let Some(fail) = expect_value(store, &[pos], &reference[pos], step) {
                    return Some(fail);
                }
                if step % 64 == 0 && store.get(&[size]).is_ok() {
                    return Some(format!("step {step}: out-of-range get[{size}] succeeded"));
                }
            }
        }
    }
    None
}

fn expect_value(
    store: &dyn IndexedStore,
    coords: &[usize],
    want: &Value,
    step: u64,
) -> Option<String> {
    match store.get(coords) {
        Ok(got) if got == *want => None,
        Ok(got) => Some(format!(
            "step {step}: get{coords:?} = {got:?}, want {want:?}"
        )),
        Err(e) => Some(format!("step {step}: get{coords:?} failed: {e}")),
    }
}

fn random_value(kind: ElementKind, rng: &mut ChaCha8Rng) -> Value {
    match kind {
        ElementKind::Integer => Value::Int(rng.gen_range(-1_000_000..=1_000_000)),
        // Sixteenths stay exact in binary, so equality is byte-for-byte.
        ElementKind::Double => Value::Real(rng.gen_range(-64_000i32..=64_000) as f64 / 16.0),
        ElementKind::Text => {
            let len = rng.gen_range(0..=6);
            Value::Text((0..len).map(|_| rng.gen_range('a'..='z')).collect())
        }
        ElementKind::Char => Value::Ch(rng.gen_range('a'..='z')),
    }
}

/// Runs every suite with the given budgets.
pub fn run_all(size_limit: usize, ops_per_case: u64, seed: u64) -> Vec<SuiteOutcome> {
    let sizes: Vec<usize> = (1..=257).collect();
    vec![
        split_bijection(size_limit),
        merge_bijection(40),
        fold_flatten_inverse(seed),
        affine_permutation(50, seed),
        hide_roundtrip(100),
        store_reference_equivalence(&sizes, ops_per_case, seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_reduced_budgets() {
        for outcome in run_all(64, 200, 1) {
            assert!(
                outcome.passed(),
                "{}: {:?}",
                outcome.name,
                outcome.counterexample
            );
            assert!(outcome.cases > 0);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_all(32, 100, 7);
        let b = run_all(32, 100, 7);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.cases, y.cases);
            assert_eq!(x.counterexample, y.counterexample);
        }
    }

    /// A store that writes one slot to the right of where it should —
    /// the harness must catch it and report a counterexample.
    struct SkewedStore {
        inner: Store,
        size: usize,
    }

    impl IndexedStore for SkewedStore {
        fn set(&mut self, coords: &[usize], value: Value) -> crate::Result<()> {
            let skewed = [(coords[0] + 1) % self.size];
            self.inner.set(&skewed, value)
        }

        fn get(&self, coords: &[usize]) -> crate::Result<Value> {
            self.inner.get(coords)
        }

        fn length(&self) -> usize {
            self.inner.length()
        }
    }

    #[test]
    fn harness_detects_an_injected_fault() {
        let size = 23;
        let mut faulty = SkewedStore {
            inner: Store::new(RestructureOp::Split, ElementKind::Integer, &[size]).unwrap(),
            size,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fail = drive_store(
            &mut faulty,
            RestructureOp::Split,
            ElementKind::Integer,
            &[size],
            size,
            2_000,
            &mut rng,
        );
        assert!(fail.is_some(), "skewed store must be detected");
    }
}
