//! Emission of the twelve accessor classes, class planning, and
//! workspace file writing.
//!
//! Each class comes in two variants: a stub with empty/return-only bodies
//! (so user code compiles before the rewrite step) and a full variant
//! whose accessor bodies are textual renderings of the `index_maps`
//! functions. With hiding enabled, a fixed list of integer literal sites
//! per operation (9 split, 5 folded, 3 flattened) is replaced by distinct
//! `F(...)` calls and the helper method is embedded. Index obscuring
//! additionally permutes logical positions with an affine map whose
//! multiplier the emitted constructor derives from the array length.
//!
//! Emission is pure and deterministic for a fixed config; the per-class
//! random stream is seeded from `config.seed` and the class name.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hiding;
use crate::parser::{self, ArrayDecl};
use crate::store::{ElementKind, RestructureOp};

/// Default seed used by the command-line tool when none is given, so
/// casual runs are reproducible.
pub const DEFAULT_SEED: u64 = 42;

/// Knobs for full-class emission.
#[derive(Debug, Clone)]
pub struct ObfConfig {
    /// Replace the per-operation literal sites with `F(...)` calls.
    pub hide_constants: bool,
    /// Fixed chain depth for every site; `None` draws a depth in 1..=13
    /// per site from the seed.
    pub hide_depth: Option<u32>,
    /// Permute logical indices with an affine map before layout mapping.
    pub index_obfuscate: bool,
    pub seed: u64,
}

impl Default for ObfConfig {
    fn default() -> Self {
        ObfConfig {
            hide_constants: false,
            hide_depth: None,
            index_obfuscate: false,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Stub,
    Full,
}

/// An emitted accessor class.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedClass {
    pub name: String,
    pub op: RestructureOp,
    pub kind: ElementKind,
    pub variant: Variant,
    pub source_text: String,
    pub statement_count: usize,
    pub hiding_sites: usize,
}

/// `<OpPrefix>Array_<KindName>`, e.g. `SplitArray_Integer`.
pub fn class_name(op: RestructureOp, kind: ElementKind) -> String {
    format!("{}Array_{}", op.prefix(), kind.java_name())
}

/// The twelve (op, kind) pairs in op-major, kind order.
pub fn predefined_classes() -> Vec<(RestructureOp, ElementKind)> {
    let mut all = Vec::with_capacity(12);
    for op in RestructureOp::ALL {
        for kind in ElementKind::ALL {
            all.push((op, kind));
        }
    }
    all
}

/// Inverse of [`class_name`] over the twelve predefined names.
pub fn class_name_parts(name: &str) -> Option<(RestructureOp, ElementKind)> {
    predefined_classes()
        .into_iter()
        .find(|(op, kind)| class_name(*op, *kind) == name)
}

/// Smallest odd multiplier coprime to `n`, starting from 3 — always
/// prime, because any composite candidate has a smaller coprime odd
/// factor. Mirrors the loop the index-obscured constructors run.
pub fn index_multiplier(n: usize) -> usize {
    let mut k = 3;
    while crate::index_maps::gcd(k, n) != 1 {
        k += 2;
    }
    k
}

fn field_prefix(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::Integer => "iObj",
        ElementKind::Double => "dObj",
        ElementKind::Text => "sObj",
        ElementKind::Char => "cObj",
    }
}

/// Stub variant: empty constructor and setter, getter returning the kind
/// default, length returning 0. Uniform four-member shape for all ops.
pub fn emit_stub(op: RestructureOp, kind: ElementKind) -> GeneratedClass {
    let cls = class_name(op, kind);
    let jt = kind.java_type();
    let default = kind.default_literal();
    let (ctor_params, set_params, get_params) = match op {
        RestructureOp::Flattened => (
            "int rows, int cols".to_string(),
            format!("int i, int j, {jt} elem"),
            "int i, int j",
        ),
        _ => ("int size".to_string(), format!("int pos, {jt} elem"), "int pos"),
    };
    let source_text = format!(
        "public class {cls} {{\n\
         \x20   public {cls}({ctor_params}) {{}}\n\
         \x20   public void setArray({set_params}) {{}}\n\
         \x20   public {jt} getArray({get_params}) {{ return {default}; }}\n\
         \x20   public int lengthArray() {{ return 0; }}\n\
         }}\n"
    );
    let statement_count = parser::count_statements(&source_text);
    GeneratedClass {
        name: cls,
        op,
        kind,
        variant: Variant::Stub,
        source_text,
        statement_count,
        hiding_sites: 0,
    }
}

/// Full variant with the restructured backing and real accessor bodies.
pub fn emit_full(op: RestructureOp, kind: ElementKind, config: &ObfConfig) -> GeneratedClass {
    let name = class_name(op, kind);
    let mut sites = LiteralSites::new(config, &name);
    let source_text = match op {
        RestructureOp::Split => split_source(kind, config, &mut sites),
        RestructureOp::Folded => folded_source(kind, config, &mut sites),
        RestructureOp::Flattened => flattened_source(kind, config, &mut sites),
    };
    let statement_count = parser::count_statements(&source_text);
    GeneratedClass {
        name,
        op,
        kind,
        variant: Variant::Full,
        source_text,
        statement_count,
        hiding_sites: sites.rendered_sites(),
    }
}

/// Renders integer literals, replacing hideable ones with distinct
/// `F(...)` calls when hiding is on. One instance per class, seeded from
/// the config seed and the class name.
struct LiteralSites {
    enabled: bool,
    depth: Option<u32>,
    rng: ChaCha8Rng,
    used: BTreeSet<String>,
}

impl LiteralSites {
    fn new(config: &ObfConfig, class_name: &str) -> Self {
        LiteralSites {
            enabled: config.hide_constants,
            depth: config.hide_depth,
            rng: ChaCha8Rng::seed_from_u64(config.seed ^ fnv1a64(class_name.as_bytes())),
            used: BTreeSet::new(),
        }
    }

    /// Renders one hiding site of the given value (must be below the
    /// hiding bound). Redraws until the call text is distinct within the
    /// class.
    fn lit(&mut self, value: u64) -> String {
        if !self.enabled {
            return value.to_string();
        }
        loop {
            let depth = self
                .depth
                .unwrap_or_else(|| self.rng.gen_range(1..=hiding::MAX_DEPTH));
            let call = hiding::hide_constant(value, depth, self.rng.gen())
                .expect("site values are below the hiding bound");
            let text = hiding::render_call(&call);
            if self.used.insert(text.clone()) {
                return text;
            }
        }
    }

    fn rendered_sites(&self) -> usize {
        self.used.len()
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

// Hiding sites per operation (values in parentheses), fixed so the
// emitted classes always carry 9/5/3 distinct calls:
//   split:     ctor size/2 (2, 2, 2), set pos%2 + pos/2 twice (2, 2, 2),
//              get pos%2 + pos/2 twice (2, 2, 2) — the ctor parity
//              comparison stays plain
//   folded:    ctor cols seed (1), cols step (1), rows ceil-div (1),
//              set guard (0), get guard (0)
//   flattened: ctor size clamp (0), set guard (0), get guard (0)
// Kind-default return literals and the index-permutation setup are never
// hidden.

fn split_source(kind: ElementKind, config: &ObfConfig, sites: &mut LiteralSites) -> String {
    let cls = class_name(RestructureOp::Split, kind);
    let jt = kind.java_type();
    let p = field_prefix(kind);
    let idx = config.index_obfuscate;
    let mut w = String::new();
    let _ = writeln!(w, "public class {cls} {{");
    let _ = writeln!(w, "    {jt}[] {p}1;");
    let _ = writeln!(w, "    {jt}[] {p}2;");
    if idx {
        let _ = writeln!(w, "    int n;");
        let _ = writeln!(w, "    int k;");
    }
    let _ = writeln!(w, "    public {cls}(int size) {{");
    if idx {
        let _ = writeln!(w, "        n = size;");
        let _ = writeln!(w, "        k = 3;");
        let _ = writeln!(w, "        while (gcd(k, n) != 1)");
        let _ = writeln!(w, "            k = k + 2;");
    }
    let _ = writeln!(w, "        if ((size % 2) == 0) {{");
    let _ = writeln!(w, "            {p}1 = new {jt}[(int) (size / {})];", sites.lit(2));
    let _ = writeln!(w, "            {p}2 = new {jt}[(int) (size / {})];", sites.lit(2));
    let _ = writeln!(w, "        }} else {{");
    let _ = writeln!(w, "            int temp = (int) (size / {}) + 1;", sites.lit(2));
    let _ = writeln!(w, "            {p}1 = new {jt}[temp];");
    let _ = writeln!(w, "            {p}2 = new {jt}[size - temp];");
    let _ = writeln!(w, "        }}");
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public void setArray(int pos, {jt} elem) {{");
    if idx {
        let _ = writeln!(w, "        pos = mapIndex(pos);");
    }
    let _ = writeln!(w, "        if ((pos % {}) == 0)", sites.lit(2));
    let _ = writeln!(w, "            {p}1[(int) pos / {}] = elem;", sites.lit(2));
    let _ = writeln!(w, "        else");
    let _ = writeln!(w, "            {p}2[(int) pos / {}] = elem;", sites.lit(2));
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public {jt} getArray(int pos) {{");
    if idx {
        let _ = writeln!(w, "        pos = mapIndex(pos);");
    }
    let _ = writeln!(w, "        if ((pos % {}) == 0)", sites.lit(2));
    let _ = writeln!(w, "            return ({p}1[(int) pos / {}]);", sites.lit(2));
    let _ = writeln!(w, "        else");
    let _ = writeln!(w, "            return ({p}2[(int) pos / {}]);", sites.lit(2));
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public int lengthArray() {{");
    let _ = writeln!(w, "        return ({p}1.length + {p}2.length);");
    let _ = writeln!(w, "    }}");
    append_helpers(&mut w, config, "n");
    let _ = writeln!(w, "}}");
    w
}

fn folded_source(kind: ElementKind, config: &ObfConfig, sites: &mut LiteralSites) -> String {
    let cls = class_name(RestructureOp::Folded, kind);
    let jt = kind.java_type();
    let p = field_prefix(kind);
    let default = kind.default_literal();
    let idx = config.index_obfuscate;
    let mut w = String::new();
    let _ = writeln!(w, "public class {cls} {{");
    let _ = writeln!(w, "    {jt}[][] {p};");
    let _ = writeln!(w, "    int rows;");
    let _ = writeln!(w, "    int cols;");
    let _ = writeln!(w, "    int size;");
    if idx {
        let _ = writeln!(w, "    int k;");
    }
    let _ = writeln!(w, "    public {cls}(int size) {{");
    let _ = writeln!(w, "        this.size = size;");
    let _ = writeln!(w, "        cols = {};", sites.lit(1));
    let _ = writeln!(w, "        while ((cols * cols) < size)");
    let _ = writeln!(w, "            cols = cols + {};", sites.lit(1));
    let _ = writeln!(w, "        rows = ((size + cols) - {}) / cols;", sites.lit(1));
    let _ = writeln!(w, "        {p} = new {jt}[rows][cols];");
    if idx {
        let _ = writeln!(w, "        k = 3;");
        let _ = writeln!(w, "        while (gcd(k, size) != 1)");
        let _ = writeln!(w, "            k = k + 2;");
    }
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public void setArray(int pos, {jt} elem) {{");
    let guard_set = format!("if ((pos >= {}) && (pos < size))", sites.lit(0));
    if idx {
        let _ = writeln!(w, "        {guard_set} {{");
        let _ = writeln!(w, "            pos = mapIndex(pos);");
        let _ = writeln!(w, "            {p}[pos / cols][pos % cols] = elem;");
        let _ = writeln!(w, "        }}");
    } else {
        let _ = writeln!(w, "        {guard_set}");
        let _ = writeln!(w, "            {p}[pos / cols][pos % cols] = elem;");
    }
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public {jt} getArray(int pos) {{");
    let guard_get = format!("if ((pos >= {}) && (pos < size))", sites.lit(0));
    if idx {
        let _ = writeln!(w, "        {guard_get} {{");
        let _ = writeln!(w, "            pos = mapIndex(pos);");
        let _ = writeln!(w, "            return ({p}[pos / cols][pos % cols]);");
        let _ = writeln!(w, "        }}");
    } else {
        let _ = writeln!(w, "        {guard_get}");
        let _ = writeln!(w, "            return ({p}[pos / cols][pos % cols]);");
    }
    let _ = writeln!(w, "        return {default};");
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public int lengthArray() {{");
    let _ = writeln!(w, "        return (rows * cols);");
    let _ = writeln!(w, "    }}");
    append_helpers(&mut w, config, "size");
    let _ = writeln!(w, "}}");
    w
}

fn flattened_source(kind: ElementKind, config: &ObfConfig, sites: &mut LiteralSites) -> String {
    let cls = class_name(RestructureOp::Flattened, kind);
    let jt = kind.java_type();
    let p = field_prefix(kind);
    let default = kind.default_literal();
    let idx = config.index_obfuscate;
    let mut w = String::new();
    let _ = writeln!(w, "public class {cls} {{");
    let _ = writeln!(w, "    {jt}[] {p};");
    let _ = writeln!(w, "    int rows;");
    let _ = writeln!(w, "    int cols;");
    if idx {
        let _ = writeln!(w, "    int k;");
    }
    let _ = writeln!(w, "    public {cls}(int rows, int cols) {{");
    let _ = writeln!(w, "        this.rows = rows;");
    let _ = writeln!(w, "        this.cols = cols;");
    let _ = writeln!(w, "        {p} = new {jt}[Math.max(rows * cols, {})];", sites.lit(0));
    if idx {
        let _ = writeln!(w, "        k = 3;");
        let _ = writeln!(w, "        while (gcd(k, {p}.length) != 1)");
        let _ = writeln!(w, "            k = k + 2;");
    }
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public void setArray(int i, int j, {jt} elem) {{");
    let _ = writeln!(w, "        int pos = (i * cols) + j;");
    let guard_set = format!("if ((pos >= {}) && (pos < {p}.length))", sites.lit(0));
    if idx {
        let _ = writeln!(w, "        {guard_set} {{");
        let _ = writeln!(w, "            pos = mapIndex(pos);");
        let _ = writeln!(w, "            {p}[pos] = elem;");
        let _ = writeln!(w, "        }}");
    } else {
        let _ = writeln!(w, "        {guard_set}");
        let _ = writeln!(w, "            {p}[pos] = elem;");
    }
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public {jt} getArray(int i, int j) {{");
    let _ = writeln!(w, "        int pos = (i * cols) + j;");
    let guard_get = format!("if ((pos >= {}) && (pos < {p}.length))", sites.lit(0));
    if idx {
        let _ = writeln!(w, "        {guard_get} {{");
        let _ = writeln!(w, "            pos = mapIndex(pos);");
        let _ = writeln!(w, "            return ({p}[pos]);");
        let _ = writeln!(w, "        }}");
    } else {
        let _ = writeln!(w, "        {guard_get}");
        let _ = writeln!(w, "            return ({p}[pos]);");
    }
    let _ = writeln!(w, "        return {default};");
    let _ = writeln!(w, "    }}");
    let _ = writeln!(w, "    public int lengthArray() {{");
    let _ = writeln!(w, "        return ({p}.length);");
    let _ = writeln!(w, "    }}");
    append_helpers(&mut w, config, &format!("{p}.length"));
    let _ = writeln!(w, "}}");
    w
}

fn append_helpers(w: &mut String, config: &ObfConfig, modulus_expr: &str) {
    if config.index_obfuscate {
        let _ = writeln!(w, "    private static int gcd(int a, int b) {{");
        let _ = writeln!(w, "        while (b != 0) {{");
        let _ = writeln!(w, "            int t = a % b;");
        let _ = writeln!(w, "            a = b;");
        let _ = writeln!(w, "            b = t;");
        let _ = writeln!(w, "        }}");
        let _ = writeln!(w, "        return a;");
        let _ = writeln!(w, "    }}");
        let _ = writeln!(w, "    private int mapIndex(int pos) {{");
        let _ = writeln!(w, "        return (int) (((long) pos * k) % {modulus_expr});");
        let _ = writeln!(w, "    }}");
    }
    if config.hide_constants {
        w.push_str(&hiding::emit_hiding_helper().text);
    }
}

/// An `F(...)` call site found in emitted text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractedCall {
    /// Byte range of the whole call in the source text.
    pub start: usize,
    pub end: usize,
    /// Argument after surface reduction: `A % B` or the bare number.
    pub y: u64,
    pub count: u32,
}

/// Finds rendered hiding calls — `F(<num> % <num>, <num>)` or
/// `F(<num>, <num>)` — skipping the helper definition, whose parameters
/// are not numeric.
pub fn extract_hiding_calls(source: &str) -> Vec<ExtractedCall> {
    let bytes = source.as_bytes();
    let mut calls = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        if bytes[i] == b'F'
            && (i == 0 || !is_ident_byte(bytes[i - 1]))
            && matches!(bytes.get(i + 1), Some(b'('))
        {
            if let Some(call) = parse_call(source, i) {
                i = call.end;
                calls.push(call);
                continue;
            }
        }
        i += 1;
    }
    calls
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$'
}

fn parse_call(source: &str, start: usize) -> Option<ExtractedCall> {
    let bytes = source.as_bytes();
    let mut i = start + 2; // past "F("
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let number = |i: &mut usize| -> Option<u64> {
        let begin = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        (*i > begin).then(|| source[begin..*i].parse().ok())?
    };
    skip_ws(&mut i);
    let a = number(&mut i)?;
    skip_ws(&mut i);
    let y = if bytes.get(i) == Some(&b'%') {
        i += 1;
        skip_ws(&mut i);
        let b = number(&mut i)?;
        if b == 0 {
            return None;
        }
        a % b
    } else {
        a
    };
    skip_ws(&mut i);
    if bytes.get(i) != Some(&b',') {
        return None;
    }
    i += 1;
    skip_ws(&mut i);
    let count = number(&mut i)? as u32;
    skip_ws(&mut i);
    if bytes.get(i) != Some(&b')') {
        return None;
    }
    Some(ExtractedCall {
        start,
        end: i + 1,
        y,
        count,
    })
}

/// A declaration skipped during planning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanIssue {
    pub decl: String,
    pub message: String,
}

/// One planned class per distinct element kind among the declarations
/// compatible with `op` (1-D for Split/Folded, 2-D for Flattened), in
/// kind order. Incompatible declarations are skipped with an issue.
pub fn plan_classes(
    decls: &[ArrayDecl],
    op: RestructureOp,
) -> (Vec<(RestructureOp, ElementKind)>, Vec<PlanIssue>) {
    let wanted_dims = op.arity();
    let mut kinds = BTreeSet::new();
    let mut issues = Vec::new();
    for decl in decls {
        if decl.extents.len() == wanted_dims {
            kinds.insert(decl.kind);
        } else {
            issues.push(PlanIssue {
                decl: decl.name.clone(),
                message: format!(
                    "`{}` has {} dimension(s) but {:?} needs {}; skipped",
                    decl.name,
                    decl.extents.len(),
                    op,
                    wanted_dims
                ),
            });
        }
    }
    (kinds.into_iter().map(|kind| (op, kind)).collect(), issues)
}

/// Writes each class as `<ClassName>.java` in `dir`, overwriting existing
/// files. Every file goes through a temp-and-rename so a failure never
/// leaves a truncated class behind. Returns the paths in write order.
pub fn write_workspace(classes: &[GeneratedClass], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(classes.len());
    for class in classes {
        let path = dir.join(format!("{}.java", class.name));
        let tmp = dir.join(format!(".{}.java.tmp", class.name));
        if let Err(source) = fs::write(&tmp, &class.source_text) {
            return Err(Error::Workspace { path: tmp, source });
        }
        if let Err(source) = fs::rename(&tmp, &path) {
            let _ = fs::remove_file(&tmp);
            return Err(Error::Workspace { path, source });
        }
        written.push(path);
    }
    Ok(written)
}
