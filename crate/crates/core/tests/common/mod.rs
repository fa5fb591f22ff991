//! Shared fixtures for the acceptance suite: the Lagrangian corpus and
//! seeded random generators.

pub mod oracle;

use jetvar_core::jetspace::SpaceSpec;
use jetvar_core::symexpr::Var;
use jetvar_core::{Expr, JetSpace, Lagrangian, Rat};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct CorpusEntry {
    pub name: &'static str,
    pub space: JetSpace,
    pub lagrangian: Lagrangian,
    /// Numeric values of declared constants, for the numeric oracle.
    pub constant_values: Vec<(String, f64)>,
}

fn entry(
    name: &'static str,
    base: &[&str],
    fields: &[&str],
    order: u32,
    constants: &[(&str, f64)],
    density: &str,
) -> CorpusEntry {
    // one parameter per field so identity lifts exist
    let params: Vec<String> = (1..=fields.len()).map(|i| format!("e{i}")).collect();
    let params_ref: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
    let const_names: Vec<&str> = constants.iter().map(|(n, _)| *n).collect();
    let space = JetSpace::new(
        SpaceSpec::new(base, fields, order)
            .params(&params_ref)
            .constants(&const_names),
    )
    .unwrap_or_else(|e| panic!("corpus space {name}: {e}"));
    let expr = space
        .parse(density)
        .unwrap_or_else(|e| panic!("corpus density {name}: {e}"));
    let lagrangian = Lagrangian::new(&space, expr)
        .unwrap_or_else(|e| panic!("corpus lagrangian {name}: {e}"));
    CorpusEntry {
        name,
        space,
        lagrangian,
        constant_values: constants.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
    }
}

/// The acceptance corpus: n in {1,2,3}, m in {1,2,3}, jet orders 1-3.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        entry("free_particle", &["t"], &["y"], 4, &[], "(1/2)*y_t^2"),
        entry("harmonic_oscillator", &["t"], &["y"], 4, &[], "(1/2)*(y_t^2 - y^2)"),
        entry("quartic_oscillator", &["t"], &["y"], 4, &[], "(1/2)*y_t^2 - (1/4)*y^4"),
        entry("cubic_potential", &["t"], &["y"], 4, &[], "(1/2)*y_t^2 + (1/3)*y^3"),
        entry("driven_oscillator", &["t"], &["y"], 4, &[], "(1/2)*y_t^2 - (1/2)*y^2 + t*y"),
        entry(
            "coupled_oscillators",
            &["t"],
            &["u", "v"],
            4,
            &[],
            "(1/2)*(u_t^2 + v_t^2) - (1/2)*(u - v)^2",
        ),
        entry(
            "sigma_like_pair",
            &["t"],
            &["u", "v"],
            4,
            &[],
            "(1/2)*(1 + u^2 + v^2)*(u_t^2 + v_t^2)",
        ),
        entry("elastica", &["t"], &["y"], 8, &[], "(1/2)*y_tt^2"),
        entry("beam_with_potential", &["t"], &["y"], 8, &[], "(1/2)*y_tt^2 - (1/2)*y^2"),
        entry("third_order_kinetic", &["t"], &["y"], 12, &[], "(1/2)*y_ttt^2"),
        entry(
            "mixed_order",
            &["t"],
            &["y"],
            8,
            &[],
            "(1/2)*y_tt^2 + (1/2)*y_t^2 - (1/3)*y^3",
        ),
        entry(
            "triple_product",
            &["t"],
            &["u", "v", "w"],
            4,
            &[],
            "(1/2)*(u_t^2 + v_t^2 + w_t^2) - u*v*w",
        ),
        entry("rational_time_kinetic", &["t"], &["y"], 4, &[], "y_t^2/(1 + t^2)"),
        entry("quartic_velocity", &["t"], &["y"], 4, &[], "(1/4)*y_t^4 - (1/2)*y^2"),
        entry("divergence_density", &["t"], &["y"], 4, &[], "2*y*y_t"),
        entry(
            "klein_gordon",
            &["x", "t"],
            &["y"],
            4,
            &[("m", 1.0)],
            "(1/2)*(y_t^2 - y_x^2 - m^2*y^2)",
        ),
        entry(
            "wave_with_source",
            &["x", "t"],
            &["y"],
            4,
            &[],
            "(1/2)*(y_t^2 - y_x^2) + x*y",
        ),
        entry("phi4_2d", &["x", "t"], &["y"], 4, &[], "(1/2)*(y_t^2 - y_x^2) - (1/4)*y^4"),
        entry(
            "bilinear_pair_2d",
            &["x", "t"],
            &["u", "v"],
            4,
            &[],
            "u_t*v_t - u_x*v_x - u*v",
        ),
        entry("biharmonic_2d", &["x", "t"], &["y"], 8, &[], "(1/2)*(y_xx + y_tt)^2"),
        entry("laplace_2d", &["x", "t"], &["y"], 4, &[], "(1/2)*(y_x^2 + y_t^2)"),
        entry(
            "sigma_2d",
            &["x", "t"],
            &["u", "v"],
            4,
            &[],
            "(1/2)*(1 + u^2)*(u_t^2 + v_t^2) - (1/2)*(u_x^2 + v_x^2)",
        ),
        entry("laplace_3d", &["x", "y", "z"], &["u"], 4, &[], "(1/2)*(u_x^2 + u_y^2 + u_z^2)"),
        entry(
            "maxwell_3d",
            &["x", "y", "z"],
            &["A1", "A2", "A3"],
            4,
            &[],
            "-(1/2)*((A2_x - A1_y)^2 + (A3_y - A2_z)^2 + (A1_z - A3_x)^2)",
        ),
        entry(
            "phi4_3d",
            &["x", "y", "z"],
            &["u"],
            4,
            &[],
            "(1/2)*(u_x^2 + u_y^2 + u_z^2) + (1/2)*u^2 - (1/4)*u^4",
        ),
        entry(
            "coupled_3d",
            &["x", "y", "z"],
            &["u", "v"],
            4,
            &[],
            "(1/2)*(u_x^2 + u_y^2 + u_z^2) + (1/2)*(v_x^2 + v_y^2 + v_z^2) - u^2*v^2",
        ),
        entry(
            "triple_3d",
            &["x", "y", "z"],
            &["u", "v", "w"],
            4,
            &[],
            "(1/2)*(u_x^2 + v_y^2 + w_z^2) + u*v*w",
        ),
    ]
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rat {
    let num: i64 = rng.gen_range(-6..=6);
    let den: i64 = rng.gen_range(1..=4);
    Rat::new(num.into(), den.into())
}

/// Random polynomial expression over base coordinates, field jets up to
/// `max_order`, and constants.
pub fn random_poly_expr(
    space: &JetSpace,
    rng: &mut ChaCha8Rng,
    max_order: u32,
    max_factors: u32,
    terms: usize,
) -> Expr {
    let mut pool: Vec<Var> = Vec::new();
    for c in space.coords() {
        use jetvar_core::CoordKind::*;
        match c.kind {
            Base | Constant => pool.push(c.var()),
            FieldJet if c.order() <= max_order => pool.push(c.var()),
            _ => {}
        }
    }
    let mut acc = Expr::zero(space.id());
    for _ in 0..terms {
        let mut term = Expr::constant(space.id(), small_rational(rng));
        let factors = rng.gen_range(0..=max_factors);
        for _ in 0..factors {
            let v = pool[rng.gen_range(0..pool.len())];
            let c = space.coord(v);
            term = term.mul(&Expr::coord(c));
        }
        acc = acc.add(&term);
    }
    acc
}

/// Random rational expression (possibly with a nontrivial denominator).
pub fn random_rational_expr(
    space: &JetSpace,
    rng: &mut ChaCha8Rng,
    max_order: u32,
) -> Expr {
    let terms = rng.gen_range(1..=4);
    let num = random_poly_expr(space, rng, max_order, 3, terms);
    if rng.gen_bool(0.5) {
        return num;
    }
    // denominator 1 + q^2 is never the zero polynomial
    let q = random_poly_expr(space, rng, max_order, 2, 2);
    let den = Expr::one(space.id()).add(&q.mul(&q));
    num.div(&den).expect("denominator nonzero")
}
