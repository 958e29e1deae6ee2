//! Executable models of the generated accessor classes.
//!
//! A [`Store`] behaves exactly like one instantiated `SplitArray_*` /
//! `FoldedArray_*` / `FlattenedArray_*` object: same constructor extents,
//! same set/get coordinate space, same length convention. The test suites
//! drive stores against plain flat arrays, which makes them the semantic
//! reference for the formulas the codegen module emits.

use crate::error::{Error, Result};
use crate::index_maps::{self, Dim2, Half};

/// Element kinds of the four class families.
///
/// Declaration order is the planning order (Integer, Double, String, Char).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    Integer,
    Double,
    Text,
    Char,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [
        ElementKind::Integer,
        ElementKind::Double,
        ElementKind::Text,
        ElementKind::Char,
    ];

    /// Class-name suffix: `Integer`, `Double`, `String`, `Char`.
    pub fn java_name(&self) -> &'static str {
        match self {
            ElementKind::Integer => "Integer",
            ElementKind::Double => "Double",
            ElementKind::Text => "String",
            ElementKind::Char => "Char",
        }
    }

    /// Java element type: `int`, `double`, `String`, `char`.
    pub fn java_type(&self) -> &'static str {
        match self {
            ElementKind::Integer => "int",
            ElementKind::Double => "double",
            ElementKind::Text => "String",
            ElementKind::Char => "char",
        }
    }

    /// Java literal for the kind's default value.
    ///
    /// Unset String cells read as the empty string rather than null, so
    /// get-before-set stays total; the stores use the same convention.
    pub fn default_literal(&self) -> &'static str {
        match self {
            ElementKind::Integer => "0",
            ElementKind::Double => "0.0",
            ElementKind::Text => "\"\"",
            ElementKind::Char => "'\\u0000'",
        }
    }

    pub fn default_value(&self) -> Value {
        match self {
            ElementKind::Integer => Value::Int(0),
            ElementKind::Double => Value::Real(0.0),
            ElementKind::Text => Value::Text(String::new()),
            ElementKind::Char => Value::Ch('\0'),
        }
    }

    /// Parses the class-name suffix form (`Integer`, `String`, ...).
    pub fn from_java_name(name: &str) -> Option<ElementKind> {
        ElementKind::ALL.into_iter().find(|k| k.java_name() == name)
    }
}

/// The three restructuring operations the tool generates classes for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RestructureOp {
    Split,
    Folded,
    Flattened,
}

impl RestructureOp {
    pub const ALL: [RestructureOp; 3] = [
        RestructureOp::Split,
        RestructureOp::Folded,
        RestructureOp::Flattened,
    ];

    /// Class-name prefix: `Split`, `Folded`, `Flattened`.
    pub fn prefix(&self) -> &'static str {
        match self {
            RestructureOp::Split => "Split",
            RestructureOp::Folded => "Folded",
            RestructureOp::Flattened => "Flattened",
        }
    }

    /// Constructor/coordinate arity: 1 for Split/Folded, 2 for Flattened.
    pub fn arity(&self) -> usize {
        match self {
            RestructureOp::Flattened => 2,
            _ => 1,
        }
    }
}

/// A single element value, tagged by kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Real(f64),
    Text(String),
    Ch(char),
}

impl Value {
    pub fn kind(&self) -> ElementKind {
        match self {
            Value::Int(_) => ElementKind::Integer,
            Value::Real(_) => ElementKind::Double,
            Value::Text(_) => ElementKind::Text,
            Value::Ch(_) => ElementKind::Char,
        }
    }
}

/// Physical layout of a store's cells. Exposed read-only so tests can
/// check structural laws (e.g. even positions live in the first split
/// sub-array) rather than just observable behaviour.
#[derive(Debug, Clone, PartialEq)]
pub enum Backing {
    Split { first: Vec<Value>, second: Vec<Value> },
    Folded { grid: Vec<Vec<Value>> },
    Flattened { cells: Vec<Value> },
}

/// An in-process restructured array.
///
/// Split and Folded stores take one extent (the logical 1-D size) and one
/// coordinate; Flattened stores take two of each. Mutable value object
/// with single-owner semantics — no interior sharing.
#[derive(Debug, Clone)]
pub struct Store {
    op: RestructureOp,
    kind: ElementKind,
    logical_size: usize,
    dims: Option<Dim2>,
    backing: Backing,
}

impl Store {
    pub fn new(op: RestructureOp, kind: ElementKind, extents: &[usize]) -> Result<Store> {
        if extents.len() != op.arity() {
            return Err(Error::WrongArity {
                expected: op.arity(),
                got: extents.len(),
            });
        }
        if extents.iter().any(|&e| e == 0) {
            return Err(Error::ZeroSize);
        }
        let default = kind.default_value();
        match op {
            RestructureOp::Split => {
                let size = extents[0];
                let (first_len, second_len) = index_maps::split_sizes(size)?;
                Ok(Store {
                    op,
                    kind,
                    logical_size: size,
                    dims: None,
                    backing: Backing::Split {
                        first: vec![default.clone(); first_len],
                        second: vec![default; second_len],
                    },
                })
            }
            RestructureOp::Folded => {
                let size = extents[0];
                let dims = index_maps::fold_dims(size, None)?;
                Ok(Store {
                    op,
                    kind,
                    logical_size: size,
                    dims: Some(dims),
                    backing: Backing::Folded {
                        grid: vec![vec![default; dims.cols]; dims.rows],
                    },
                })
            }
            RestructureOp::Flattened => {
                let dims = Dim2::new(extents[0], extents[1])?;
                Ok(Store {
                    op,
                    kind,
                    logical_size: dims.cells(),
                    dims: Some(dims),
                    backing: Backing::Flattened {
                        cells: vec![default; dims.cells()],
                    },
                })
            }
        }
    }

    pub fn op(&self) -> RestructureOp {
        self.op
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    /// Element count as the generated classes report it: sum of the split
    /// halves, or rows*cols for folded/flattened backings (a folded store
    /// may report more cells than the requested size when the near-square
    /// shape pads).
    pub fn length(&self) -> usize {
        match &self.backing {
            Backing::Split { first, second } => first.len() + second.len(),
            Backing::Folded { .. } | Backing::Flattened { .. } => {
                self.dims.expect("2-D backing has dims").cells()
            }
        }
    }

    /// Writes `value` at the logical coordinates. Exactly one backing
    /// cell changes — the one named by the index mapping for this op.
    pub fn set(&mut self, coords: &[usize], value: Value) -> Result<()> {
        if value.kind() != self.kind {
            return Err(Error::KindMismatch {
                expected: self.kind,
                got: value.kind(),
            });
        }
        let kind = self.kind;
        let cell = self.cell_mut(coords)?;
        debug_assert_eq!(cell.kind(), kind);
        *cell = value;
        Ok(())
    }

    /// Reads the value last written at the coordinates, or the kind
    /// default if the cell was never written.
    pub fn get(&self, coords: &[usize]) -> Result<Value> {
        self.cell(coords).cloned()
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        if coords.len() != self.op.arity() {
            return Err(Error::WrongArity {
                expected: self.op.arity(),
                got: coords.len(),
            });
        }
        Ok(())
    }

    fn cell(&self, coords: &[usize]) -> Result<&Value> {
        self.check_coords(coords)?;
        match &self.backing {
            Backing::Split { first, second } => {
                let loc = self.split_loc(coords[0])?;
                Ok(match loc.half {
                    Half::First => &first[loc.offset],
                    Half::Second => &second[loc.offset],
                })
            }
            Backing::Folded { grid } => {
                let (row, col) = self.fold_loc(coords[0])?;
                Ok(&grid[row][col])
            }
            Backing::Flattened { cells } => Ok(&cells[self.flat_loc(coords)?]),
        }
    }

    fn cell_mut(&mut self, coords: &[usize]) -> Result<&mut Value> {
        self.check_coords(coords)?;
        match self.op {
            RestructureOp::Split => {
                let loc = self.split_loc(coords[0])?;
                let Backing::Split { first, second } = &mut self.backing else {
                    unreachable!("split store has split backing");
                };
                Ok(match loc.half {
                    Half::First => &mut first[loc.offset],
                    Half::Second => &mut second[loc.offset],
                })
            }
            RestructureOp::Folded => {
                let (row, col) = self.fold_loc(coords[0])?;
                let Backing::Folded { grid } = &mut self.backing else {
                    unreachable!("folded store has folded backing");
                };
                Ok(&mut grid[row][col])
            }
            RestructureOp::Flattened => {
                let pos = self.flat_loc(coords)?;
                let Backing::Flattened { cells } = &mut self.backing else {
                    unreachable!("flattened store has flattened backing");
                };
                Ok(&mut cells[pos])
            }
        }
    }

    fn split_loc(&self, pos: usize) -> Result<index_maps::SplitLocation> {
        index_maps::split_locate(pos, self.logical_size)
    }

    /// Folded cells past the requested size are padding: allocated but
    /// unreachable through the 1-D interface, so bounds-check against the
    /// logical size, not rows*cols.
    fn fold_loc(&self, pos: usize) -> Result<(usize, usize)> {
        if pos >= self.logical_size {
            return Err(Error::OutOfBounds {
                index: pos,
                len: self.logical_size,
            });
        }
        index_maps::fold_locate(pos, self.dims.expect("folded store has dims"))
    }

    fn flat_loc(&self, coords: &[usize]) -> Result<usize> {
        index_maps::flatten_locate(coords[0], coords[1], self.dims.expect("flattened store has dims"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_layouts() {
        let s = Store::new(RestructureOp::Split, ElementKind::Integer, &[23]).unwrap();
        let Backing::Split { first, second } = s.backing() else {
            panic!("split backing")
        };
        assert_eq!((first.len(), second.len()), (12, 11));

        let f = Store::new(RestructureOp::Flattened, ElementKind::Integer, &[500, 200]).unwrap();
        let Backing::Flattened { cells } = f.backing() else {
            panic!("flattened backing")
        };
        assert_eq!(cells.len(), 100000);

        let c = Store::new(RestructureOp::Folded, ElementKind::Char, &[1]).unwrap();
        let Backing::Folded { grid } = c.backing() else {
            panic!("folded backing")
        };
        assert_eq!((grid.len(), grid[0].len()), (1, 1));
    }

    #[test]
    fn constructor_rejects_bad_extents() {
        assert!(matches!(
            Store::new(RestructureOp::Split, ElementKind::Integer, &[1, 2]),
            Err(Error::WrongArity { .. })
        ));
        assert!(matches!(
            Store::new(RestructureOp::Flattened, ElementKind::Integer, &[7]),
            Err(Error::WrongArity { .. })
        ));
        assert!(matches!(
            Store::new(RestructureOp::Folded, ElementKind::Integer, &[0]),
            Err(Error::ZeroSize)
        ));
        assert!(matches!(
            Store::new(RestructureOp::Flattened, ElementKind::Integer, &[5, 0]),
            Err(Error::ZeroSize)
        ));
    }

    #[test]
    fn split_set_get_round_trip() {
        let mut s = Store::new(RestructureOp::Split, ElementKind::Integer, &[23]).unwrap();
        assert_eq!(s.get(&[0]).unwrap(), Value::Int(0));
        s.set(&[5], Value::Int(99)).unwrap();
        assert_eq!(s.get(&[5]).unwrap(), Value::Int(99));
        // Structural law: odd position 5 lives in the second sub-array at offset 2.
        let Backing::Split { first, second } = s.backing() else {
            panic!("split backing")
        };
        assert_eq!(second[2], Value::Int(99));
        assert!(first.iter().all(|v| *v == Value::Int(0)));
    }

    #[test]
    fn flattened_last_cell_round_trip() {
        let mut f = Store::new(RestructureOp::Flattened, ElementKind::Integer, &[500, 200]).unwrap();
        f.set(&[1, 2], Value::Int(7)).unwrap();
        let Backing::Flattened { cells } = f.backing() else {
            panic!("flattened backing")
        };
        assert_eq!(cells[202], Value::Int(7));
        f.set(&[499, 199], Value::Int(-1)).unwrap();
        assert_eq!(f.get(&[499, 199]).unwrap(), Value::Int(-1));
    }

    #[test]
    fn folded_bounds_check_uses_requested_size() {
        // 5 elements fold to 2x3: six cells allocated, position 5 still rejected.
        let mut s = Store::new(RestructureOp::Folded, ElementKind::Integer, &[5]).unwrap();
        assert_eq!(s.length(), 6);
        s.set(&[4], Value::Int(4)).unwrap();
        assert!(matches!(
            s.set(&[5], Value::Int(5)),
            Err(Error::OutOfBounds { .. })
        ));
        assert!(matches!(s.get(&[5]), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn lengths_follow_constructor() {
        let s = Store::new(RestructureOp::Split, ElementKind::Integer, &[23]).unwrap();
        assert_eq!(s.length(), 23);
        let s1 = Store::new(RestructureOp::Split, ElementKind::Integer, &[1]).unwrap();
        assert_eq!(s1.length(), 1);
        let f = Store::new(RestructureOp::Flattened, ElementKind::Double, &[500, 200]).unwrap();
        assert_eq!(f.length(), 100000);
    }

    #[test]
    fn kind_mismatch_rejected() {
        let mut s = Store::new(RestructureOp::Split, ElementKind::Text, &[4]).unwrap();
        assert!(matches!(
            s.set(&[0], Value::Int(1)),
            Err(Error::KindMismatch { .. })
        ));
        s.set(&[0], Value::Text("ok".into())).unwrap();
        assert_eq!(s.get(&[0]).unwrap(), Value::Text("ok".into()));
        assert_eq!(s.get(&[1]).unwrap(), Value::Text(String::new()));
    }

    #[test]
    fn coordinate_arity_checked() {
        let s = Store::new(RestructureOp::Flattened, ElementKind::Integer, &[2, 2]).unwrap();
        assert!(matches!(s.get(&[1]), Err(Error::WrongArity { .. })));
        let s1 = Store::new(RestructureOp::Folded, ElementKind::Integer, &[4]).unwrap();
        assert!(matches!(s1.get(&[1, 1]), Err(Error::WrongArity { .. })));
    }
}
