//! Line-oriented model file parser.
//!
//! A model file is a sequence of named blocks; `#` starts a comment.
//! The full grammar with worked examples ships in `docs/model-format.md`.
//!
//! ```text
//! space
//!   base t
//!   field y
//!   param e          # optional
//!   constant m       # optional
//!   order 4
//!   metric 1 0; 0 1  # optional, n rows of n rationals
//! end
//!
//! lagrangian (1/2)*(y_t^2 - y^2)
//!
//! vectorfield time
//!   xi 1             # n lines, base order
//!   Xi 0             # m lines, field order
//! end
//!
//! lift gauge
//!   v e_x            # m lines: vertical variation per field
//! end
//!
//! algebra e2
//!   dim 3
//!   c 3 1 2 1        # c^i_{jk} = value, 1-based indices
//!   c 2 1 3 -1
//!   operator 0 0 0; 0 1 0; 0 0 1
//!   inner identity   # or `killing`, or d rows like `operator`
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt;

use jetvar_core::jetspace::SpaceSpec;
use jetvar_core::variational::{GaugeLift, Lagrangian};
use jetvar_core::{Expr, JetSpace, ProjectableVectorField, Rat};

/// Position-tagged input error.
#[derive(Debug)]
pub struct ModelError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ModelError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError { line, msg: msg.into() })
}

/// Raw inner-product declaration from an algebra block.
#[derive(Debug, Clone)]
pub enum InnerSpec {
    Identity,
    Killing,
    Rows(Vec<Vec<Rat>>),
}

/// Algebra block: structure constants as 1-based sparse triples.
#[derive(Debug, Clone)]
pub struct AlgebraBlock {
    pub name: String,
    pub dim: usize,
    /// `(i, j, k, value)` with `c^i_{jk} = value`, zero-based.
    pub triples: Vec<(usize, usize, usize, Rat)>,
    pub operator: Vec<Vec<Rat>>,
    pub inner: InnerSpec,
}

/// A fully validated model: space constructed, expressions parsed.
pub struct Model {
    pub space: JetSpace,
    pub lagrangian: Option<Lagrangian>,
    pub vector_fields: BTreeMap<String, ProjectableVectorField>,
    pub lifts: BTreeMap<String, GaugeLift>,
    pub algebra: Option<AlgebraBlock>,
}

struct SpaceBlock {
    base: Vec<String>,
    fields: Vec<String>,
    params: Vec<String>,
    constants: Vec<String>,
    order: Option<u32>,
    metric: Option<Vec<Vec<Rat>>>,
}

fn parse_rational(tok: &str, line: usize) -> Result<Rat, ModelError> {
    let parse_int = |s: &str| -> Result<num_bigint::BigInt, ModelError> {
        s.parse()
            .map_err(|_| ModelError { line, msg: format!("`{s}` is not an integer") })
    };
    match tok.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den == 0.into() {
                return err(line, "zero denominator in rational literal");
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(tok)?)),
    }
}

fn parse_matrix_rows(text: &str, line: usize) -> Result<Vec<Vec<Rat>>, ModelError> {
    text.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| parse_rational(tok, line))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

/// Parses and validates a model file. `order_cap` bounds the declared
/// jet order (the `JETVAR_ORDER_CAP` mechanism).
pub fn parse_model(text: &str, order_cap: u32) -> Result<Model, ModelError> {
    let mut space_block: Option<SpaceBlock> = None;
    let mut lagrangian_src: Option<(usize, String)> = None;
    let mut vf_blocks: Vec<(usize, String, Vec<(usize, String)>, Vec<(usize, String)>)> =
        Vec::new();
    let mut lift_blocks: Vec<(usize, String, Vec<(usize, String)>)> = Vec::new();
    let mut algebra: Option<AlgebraBlock> = None;

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    while let Some((lineno, line)) = lines.next() {
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "space" => {
                if space_block.is_some() {
                    return err(lineno, "duplicate space block");
                }
                let mut blk = SpaceBlock {
                    base: Vec::new(),
                    fields: Vec::new(),
                    params: Vec::new(),
                    constants: Vec::new(),
                    order: None,
                    metric: None,
                };
                loop {
                    let Some((ln, l)) = lines.next() else {
                        return err(lineno, "space block not closed with `end`");
                    };
                    if l == "end" {
                        break;
                    }
                    let (kw, args) = match l.split_once(char::is_whitespace) {
                        Some((k, r)) => (k, r.trim()),
                        None => (l, ""),
                    };
                    let names = || args.split_whitespace().map(str::to_string);
                    match kw {
                        "base" => blk.base.extend(names()),
                        "field" => blk.fields.extend(names()),
                        "param" => blk.params.extend(names()),
                        "constant" => blk.constants.extend(names()),
                        "order" => {
                            blk.order = Some(args.parse().map_err(|_| ModelError {
                                line: ln,
                                msg: format!("`{args}` is not a jet order"),
                            })?)
                        }
                        "metric" => blk.metric = Some(parse_matrix_rows(args, ln)?),
                        other => return err(ln, format!("unknown space entry `{other}`")),
                    }
                }
                space_block = Some(blk);
            }
            "lagrangian" => {
                if lagrangian_src.is_some() {
                    return err(lineno, "duplicate lagrangian block");
                }
                if rest.is_empty() {
                    return err(lineno, "lagrangian needs an expression");
                }
                lagrangian_src = Some((lineno, rest.to_string()));
            }
            "vectorfield" => {
                if rest.is_empty() {
                    return err(lineno, "vectorfield needs a name");
                }
                let mut xi = Vec::new();
                let mut fiber = Vec::new();
                loop {
                    let Some((ln, l)) = lines.next() else {
                        return err(lineno, "vectorfield block not closed with `end`");
                    };
                    if l == "end" {
                        break;
                    }
                    let (kw, expr) = match l.split_once(char::is_whitespace) {
                        Some((k, r)) => (k, r.trim()),
                        None => (l, ""),
                    };
                    match kw {
                        "xi" => xi.push((ln, expr.to_string())),
                        "Xi" => fiber.push((ln, expr.to_string())),
                        other => return err(ln, format!("unknown vectorfield entry `{other}`")),
                    }
                }
                vf_blocks.push((lineno, rest.to_string(), xi, fiber));
            }
            "lift" => {
                if rest.is_empty() {
                    return err(lineno, "lift needs a name");
                }
                let mut vs = Vec::new();
                loop {
                    let Some((ln, l)) = lines.next() else {
                        return err(lineno, "lift block not closed with `end`");
                    };
                    if l == "end" {
                        break;
                    }
                    let (kw, expr) = match l.split_once(char::is_whitespace) {
                        Some((k, r)) => (k, r.trim()),
                        None => (l, ""),
                    };
                    match kw {
                        "v" => vs.push((ln, expr.to_string())),
                        other => return err(ln, format!("unknown lift entry `{other}`")),
                    }
                }
                lift_blocks.push((lineno, rest.to_string(), vs));
            }
            "algebra" => {
                if algebra.is_some() {
                    return err(lineno, "duplicate algebra block");
                }
                let mut dim: Option<usize> = None;
                let mut triples = Vec::new();
                let mut operator: Option<Vec<Vec<Rat>>> = None;
                let mut inner = InnerSpec::Identity;
                loop {
                    let Some((ln, l)) = lines.next() else {
                        return err(lineno, "algebra block not closed with `end`");
                    };
                    if l == "end" {
                        break;
                    }
                    let (kw, args) = match l.split_once(char::is_whitespace) {
                        Some((k, r)) => (k, r.trim()),
                        None => (l, ""),
                    };
                    match kw {
                        "dim" => {
                            dim = Some(args.parse().map_err(|_| ModelError {
                                line: ln,
                                msg: format!("`{args}` is not a dimension"),
                            })?)
                        }
                        "c" => {
                            let toks: Vec<&str> = args.split_whitespace().collect();
                            if toks.len() != 4 {
                                return err(ln, "structure constant needs `c i j k value`");
                            }
                            let idx = |s: &str| -> Result<usize, ModelError> {
                                let v: usize = s.parse().map_err(|_| ModelError {
                                    line: ln,
                                    msg: format!("`{s}` is not an index"),
                                })?;
                                if v == 0 {
                                    return err(ln, "indices are 1-based");
                                }
                                Ok(v - 1)
                            };
                            triples.push((
                                idx(toks[0])?,
                                idx(toks[1])?,
                                idx(toks[2])?,
                                parse_rational(toks[3], ln)?,
                            ));
                        }
                        "operator" => operator = Some(parse_matrix_rows(args, ln)?),
                        "inner" => {
                            inner = match args {
                                "identity" => InnerSpec::Identity,
                                "killing" => InnerSpec::Killing,
                                rows => InnerSpec::Rows(parse_matrix_rows(rows, ln)?),
                            }
                        }
                        other => return err(ln, format!("unknown algebra entry `{other}`")),
                    }
                }
                let Some(dim) = dim else {
                    return err(lineno, "algebra block needs `dim`");
                };
                let Some(operator) = operator else {
                    return err(lineno, "algebra block needs `operator`");
                };
                algebra = Some(AlgebraBlock {
                    name: rest.to_string(),
                    dim,
                    triples,
                    operator,
                    inner,
                });
            }
            other => return err(lineno, format!("unknown block `{other}`")),
        }
    }

    // a space is required unless the model is algebra-only
    let space = match (&space_block, &algebra) {
        (None, Some(_)) => {
            // placeholder space so expression-free models still build
            JetSpace::new(SpaceSpec::new(&["t"], &["y"], 1)).expect("fallback space")
        }
        (None, None) => return err(0, "model has no space block"),
        (Some(blk), _) => {
            let Some(order) = blk.order else {
                return err(0, "space block needs `order`");
            };
            if order > order_cap {
                return err(
                    0,
                    format!("declared order {order} exceeds the order cap {order_cap}"),
                );
            }
            let base: Vec<&str> = blk.base.iter().map(String::as_str).collect();
            let fields: Vec<&str> = blk.fields.iter().map(String::as_str).collect();
            let params: Vec<&str> = blk.params.iter().map(String::as_str).collect();
            let constants: Vec<&str> = blk.constants.iter().map(String::as_str).collect();
            let mut spec = SpaceSpec::new(&base, &fields, order)
                .params(&params)
                .constants(&constants);
            if let Some(metric) = &blk.metric {
                spec = spec.metric(metric.clone());
            }
            JetSpace::new(spec).map_err(|e| ModelError { line: 0, msg: e.to_string() })?
        }
    };

    let parse_expr = |src: &str, line: usize| -> Result<Expr, ModelError> {
        space.parse(src).map_err(|e| ModelError { line, msg: e.to_string() })
    };

    let lagrangian = match lagrangian_src {
        Some((line, src)) => Some(
            Lagrangian::new(&space, parse_expr(&src, line)?)
                .map_err(|e| ModelError { line, msg: e.to_string() })?,
        ),
        None => None,
    };

    let mut vector_fields = BTreeMap::new();
    for (lineno, name, xi_src, fiber_src) in vf_blocks {
        if xi_src.len() != space.base_dim() {
            return err(
                lineno,
                format!(
                    "vectorfield `{name}`: expected {} xi lines, got {}",
                    space.base_dim(),
                    xi_src.len()
                ),
            );
        }
        if fiber_src.len() != space.field_count() {
            return err(
                lineno,
                format!(
                    "vectorfield `{name}`: expected {} Xi lines, got {}",
                    space.field_count(),
                    fiber_src.len()
                ),
            );
        }
        let xi = xi_src
            .iter()
            .map(|(ln, s)| parse_expr(s, *ln))
            .collect::<Result<Vec<_>, _>>()?;
        let fiber = fiber_src
            .iter()
            .map(|(ln, s)| parse_expr(s, *ln))
            .collect::<Result<Vec<_>, _>>()?;
        let field = ProjectableVectorField::new(&space, xi, fiber)
            .map_err(|e| ModelError { line: lineno, msg: e.to_string() })?;
        if vector_fields.insert(name.clone(), field).is_some() {
            return err(lineno, format!("duplicate vectorfield `{name}`"));
        }
    }

    let mut lifts = BTreeMap::new();
    for (lineno, name, vs) in lift_blocks {
        if vs.len() != space.field_count() {
            return err(
                lineno,
                format!(
                    "lift `{name}`: expected {} v lines, got {}",
                    space.field_count(),
                    vs.len()
                ),
            );
        }
        let vertical = vs
            .iter()
            .map(|(ln, s)| parse_expr(s, *ln))
            .collect::<Result<Vec<_>, _>>()?;
        let lift = GaugeLift::new(&space, vertical)
            .map_err(|e| ModelError { line: lineno, msg: e.to_string() })?;
        if lifts.insert(name.clone(), lift).is_some() {
            return err(lineno, format!("duplicate lift `{name}`"));
        }
    }

    Ok(Model { space, lagrangian, vector_fields, lifts, algebra })
}
