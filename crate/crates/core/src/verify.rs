//! Named verification checks behind the `verify` command. Each check is a
//! pass/fail with a detail string; the suites cover the prototile tables,
//! the hypercube descent, and the projection eigensystem.

use std::collections::BTreeSet;

use crate::catalog;
use crate::cells;
use crate::descent::{self, CubeVertex};
use crate::error::{Error, Result};
use crate::lattice::{Basis, GramData, LatticeRank, LatticeVector};
use crate::projection;

/// One verification result.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub details: String,
}

impl Check {
    fn new(name: &str, pass: bool, details: String) -> Self {
        Self {
            name: name.to_owned(),
            pass,
            details,
        }
    }
}

pub const SUITES: [&str; 4] = ["tables", "descent", "eigen", "all"];

/// Run a named suite; `all` concatenates the other three.
pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "tables" => tables_suite(),
        "descent" => descent_suite(),
        "eigen" => eigen_suite(),
        "all" => {
            let mut checks = tables_suite()?;
            checks.extend(descent_suite()?);
            checks.extend(eigen_suite()?);
            Ok(checks)
        }
        other => Err(Error::InvalidInput(format!(
            "unknown suite {other:?}; available: tables, descent, eigen, all"
        ))),
    }
}

fn rank(n: usize) -> LatticeRank {
    LatticeRank::new(n).expect("ranks used by the suites are valid")
}

fn tables_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let expected_triangle_counts = [1usize, 1, 2, 3, 4, 5, 7, 8, 10, 12];
    let mut got = Vec::new();
    for n in 2..=11 {
        got.push(catalog::triangular_prototiles(rank(n))?.len());
    }
    checks.push(Check::new(
        "triangle_class_counts",
        got == expected_triangle_counts,
        format!("n=2..11 counts {got:?}, expected {expected_triangle_counts:?}"),
    ));

    let mut parts_ok = true;
    let mut parts_detail = String::from("every triple sorted and summing to h");
    for n in 2..=11 {
        let h = n + 1;
        for t in catalog::triangular_prototiles(rank(n))? {
            let (a, b, c) = t.parts();
            if a + b + c != h || a > b || b > c || a == 0 {
                parts_ok = false;
                parts_detail = format!("n={n}: bad triple ({a},{b},{c})");
            }
        }
    }
    checks.push(Check::new("triangle_partitions", parts_ok, parts_detail));

    let mut rhombi_ok = true;
    let mut rhombi_detail = String::from("angle pairs sum to pi; squares exactly when 4 | h");
    for n in 3..=11 {
        let h = n + 1;
        let classes = catalog::rhombic_prototiles(rank(n))?;
        let mut saw_square = false;
        for class in &classes {
            let (a, b) = class.angles();
            if (a + b - std::f64::consts::PI).abs() > 1e-12 || a <= 0.0 {
                rhombi_ok = false;
                rhombi_detail = format!("n={n}: angles {a} + {b} off pi");
            }
            saw_square |= class.is_square();
        }
        if saw_square != (h % 4 == 0) {
            rhombi_ok = false;
            rhombi_detail = format!("n={n}: square present = {saw_square}, h = {h}");
        }
    }
    checks.push(Check::new("rhombus_angle_pairs", rhombi_ok, rhombi_detail));

    let mut vertex_ok = true;
    let mut vertex_detail = String::from("2^h - 2 Voronoi vertices for n = 1..10");
    for n in 1..=10 {
        let count = cells::voronoi_vertices(rank(n))?.len();
        let expected = (1usize << (n + 1)) - 2;
        if count != expected {
            vertex_ok = false;
            vertex_detail = format!("n={n}: {count} vertices, expected {expected}");
        }
    }
    checks.push(Check::new("voronoi_vertex_counts", vertex_ok, vertex_detail));

    let mut orbit_ok = true;
    let mut orbit_detail = String::from("orbit sizes are binomials C(h, s)");
    for n in 2..=8 {
        let h = n + 1;
        let mut c = 1u64;
        for s in 1..=n {
            c = c * (h as u64 - s as u64 + 1) / s as u64;
            let size = cells::delone_orbit(rank(n), s)?.len() as u64;
            if size != c {
                orbit_ok = false;
                orbit_detail = format!("n={n} orbit {s}: {size}, expected {c}");
            }
        }
    }
    checks.push(Check::new("delone_orbit_sizes", orbit_ok, orbit_detail));

    Ok(checks)
}

fn descent_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let histogram = descent::cube_orbit_decomposition(rank(4));
    checks.push(Check::new(
        "cube_orbit_histogram",
        histogram == vec![1, 1, 5, 10, 10, 5],
        format!("rank 4 histogram {histogram:?}"),
    ));

    let mut totals_ok = true;
    for n in 1..=8 {
        let sizes = descent::cube_orbit_decomposition(rank(n));
        if sizes.iter().sum::<u64>() != 1 << (n + 1) {
            totals_ok = false;
        }
    }
    checks.push(Check::new(
        "cube_orbit_totals",
        totals_ok,
        "histogram entries sum to 2^h for n = 1..8".into(),
    ));

    let lifts = descent::k_lift_check(rank(4))?;
    checks.push(Check::new(
        "k_lift_identities",
        lifts,
        "five exact lift identities plus the summed consistency".into(),
    ));

    let report = descent::rhombohedron_descent(rank(4))?;
    let detail = if report.pass() {
        format!(
            "eight vertices matched; center at half (k_1 - k_5); obtuse angle {:.4} degrees",
            report.obtuse_angle_degrees
        )
    } else {
        report.diff()
    };
    checks.push(Check::new("rhombohedron_descent", report.pass(), detail));

    let r2 = rank(2);
    let mut images = BTreeSet::new();
    for mask in 0u32..8 {
        let signs: Vec<i8> = (0..3)
            .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
            .collect();
        let v = CubeVertex::new(&signs)?;
        if v.minus_count() == 0 || v.minus_count() == 3 {
            continue;
        }
        images.insert(descent::project_cube_vertex(&v, r2)?);
    }
    let mut hexagon = BTreeSet::new();
    for i in 1..=3 {
        let k = LatticeVector::basis_vector(r2, Basis::K, i)?;
        hexagon.insert(k.clone());
        hexagon.insert(-&k);
    }
    checks.push(Check::new(
        "three_cube_hexagon",
        images == hexagon,
        format!("{} mixed images forming the hexagon of generators", images.len()),
    ));

    Ok(checks)
}

fn eigen_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut worst_residual = 0.0_f64;
    let mut worst_ortho = 0.0_f64;
    for n in 2..=11 {
        let eigen = projection::cartan_eigensystem(rank(n));
        worst_residual = worst_residual.max(eigen.residual());
        worst_ortho = worst_ortho.max(eigen.orthonormality_defect());
    }
    checks.push(Check::new(
        "eigen_residual",
        worst_residual < 1e-10,
        format!("max |C x - lambda x| over n = 2..11: {worst_residual:.3e}"),
    ));
    checks.push(Check::new(
        "eigen_orthonormality",
        worst_ortho < 1e-12,
        format!("max frame column defect over n = 2..11: {worst_ortho:.3e}"),
    ));

    let mut frame_defect = 0.0_f64;
    for n in 2..=11 {
        let frame = projection::CoxeterFrame::new(rank(n))?;
        let mut rows: Vec<&[f64]> = frame.par_rows().iter().map(Vec::as_slice).collect();
        rows.extend(frame.perp_rows().iter().map(Vec::as_slice));
        // Rows are orthonormal with respect to the lattice inner product;
        // check their Euclidean Gram against rescaled identities using the
        // k-Gram, staying with the plain dot test the rows are built for.
        for (a, ra) in rows.iter().enumerate() {
            for (b, rb) in rows.iter().enumerate() {
                let dot: f64 = ra.iter().zip(rb.iter()).map(|(x, y)| x * y).sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                frame_defect = frame_defect.max((dot - expect).abs());
            }
        }
    }
    checks.push(Check::new(
        "frame_orthonormality",
        frame_defect < 1e-12,
        format!("max row Gram defect over n = 2..11: {frame_defect:.3e}"),
    ));

    let mut rotation_ok = true;
    for n in 2..=11 {
        if !projection::coxeter_rotation_check(&projection::CoxeterFrame::new(rank(n))?) {
            rotation_ok = false;
        }
    }
    checks.push(Check::new(
        "coxeter_rotation",
        rotation_ok,
        "cyclic symmetry acts on the parallel plane as rotation by 2 pi / h".into(),
    ));

    let mut gram_ok = true;
    let mut gram_detail = String::from("k-Gram entries are delta_ij - 1/h for n = 2..8");
    for n in 2..=8 {
        let r = rank(n);
        let gram = GramData::new(r).k_gram();
        for i in 0..r.h() {
            for j in 0..r.h() {
                let ki = LatticeVector::basis_vector(r, Basis::K, i + 1)?;
                let kj = LatticeVector::basis_vector(r, Basis::K, j + 1)?;
                if ki.inner(&kj) != gram[i][j] {
                    gram_ok = false;
                    gram_detail = format!("n={n}: mismatch at ({i},{j})");
                }
            }
        }
    }
    checks.push(Check::new("gram_consistency", gram_ok, gram_detail));

    Ok(checks)
}
