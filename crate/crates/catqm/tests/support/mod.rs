//! Shared helpers for the integration suites: plain-loop complex matrix
//! arithmetic used as an independent oracle, and builders for recurring
//! network fixtures.
//!
//! The oracle works on bare `Vec<(f64, f64)>` row-major buffers so that
//! none of the library's matrix code is on the checking path.

#![allow(dead_code)]

use catqm::flow::{BoxKind, FlowBox, FlowNetwork, Wire};
use catqm::gen::{self, ChaCha8Rng};
use catqm::measurement::{MeasureKind, Measurement, SpectralDecomposition};
use catqm::ops::morphism_prim;
use catqm::{Complex64, Matrix, ObjectType, ScalarRing, Term};
use std::collections::BTreeMap;

pub type C = (f64, f64);

pub fn cadd(a: C, b: C) -> C {
    (a.0 + b.0, a.1 + b.1)
}

pub fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

pub fn cconj(a: C) -> C {
    (a.0, -a.1)
}

/// Row-major matrix product by the textbook triple loop.
pub fn naive_matmul(a: &[C], ar: usize, ac: usize, b: &[C], br: usize, bc: usize) -> Vec<C> {
    assert_eq!(ac, br, "oracle matmul shapes");
    let mut out = vec![(0.0, 0.0); ar * bc];
    for i in 0..ar {
        for j in 0..bc {
            let mut acc = (0.0, 0.0);
            for k in 0..ac {
                acc = cadd(acc, cmul(a[i * ac + k], b[k * bc + j]));
            }
            out[i * bc + j] = acc;
        }
    }
    out
}

/// Kronecker product with the row-major pairing (i1, i2) -> i1 * r2 + i2.
pub fn naive_kron(a: &[C], ar: usize, ac: usize, b: &[C], br: usize, bc: usize) -> Vec<C> {
    let mut out = vec![(0.0, 0.0); ar * br * ac * bc];
    for i1 in 0..ar {
        for j1 in 0..ac {
            for i2 in 0..br {
                for j2 in 0..bc {
                    out[(i1 * br + i2) * (ac * bc) + (j1 * bc + j2)] =
                        cmul(a[i1 * ac + j1], b[i2 * bc + j2]);
                }
            }
        }
    }
    out
}

pub fn naive_adjoint(a: &[C], ar: usize, ac: usize) -> Vec<C> {
    let mut out = vec![(0.0, 0.0); ar * ac];
    for i in 0..ar {
        for j in 0..ac {
            out[j * ar + i] = cconj(a[i * ac + j]);
        }
    }
    out
}

/// Entrywise conjugate.
pub fn naive_conj(a: &[C]) -> Vec<C> {
    a.iter().map(|&e| cconj(e)).collect()
}

pub fn entries(m: &Matrix<Complex64>) -> Vec<C> {
    m.entries().iter().map(|e| (e.re, e.im)).collect()
}

pub fn close(x: &[C], y: &[C], tol: f64) -> bool {
    x.len() == y.len()
        && x.iter().zip(y).all(|(a, b)| {
            let scale = 1.0f64
                .max(a.0.hypot(a.1))
                .max(b.0.hypot(b.1));
            (a.0 - b.0).hypot(a.1 - b.1) <= tol * scale
        })
}

/// `x == k * y` for some complex k with |k| > 0; returns k. Two zero
/// vectors count as equal with k = 1.
pub fn scalar_ratio(x: &[C], y: &[C], tol: f64) -> Option<C> {
    let (idx, &pivot) = y
        .iter()
        .enumerate()
        .max_by(|a, b| {
            let na = a.1 .0.hypot(a.1 .1);
            let nb = b.1 .0.hypot(b.1 .1);
            na.partial_cmp(&nb).expect("finite entries")
        })?;
    let pn = pivot.0.hypot(pivot.1);
    if pn == 0.0 {
        let zeros = vec![(0.0, 0.0); x.len()];
        return close(x, &zeros, tol).then_some((1.0, 0.0));
    }
    let inv = (pivot.0 / (pn * pn), -pivot.1 / (pn * pn));
    let k = cmul(x[idx], inv);
    let scaled: Vec<C> = y.iter().map(|&e| cmul(k, e)).collect();
    if close(x, &scaled, tol) && k.0.hypot(k.1) > 0.0 {
        Some(k)
    } else {
        None
    }
}

// ─────────────────────────── the quiz network ───────────────────────────
//
// Five wires, eight projectors, one winding path from H1 to H5:
//
//   t8            [f3]
//   t7   [f1]
//   t6        [f2]
//   t5        [f5 <-]
//   t4            [f4 <-]
//   t3            [f7]
//   t2                 [f8]
//   t1        [f6]
//        H1   H2   H3   H4   H5
//
// The line crosses f1..f8 in label order; f4 and f5 are declared against
// wire order so every crossing is aligned with its arrow.

pub const QUIZ_LABELS: [&str; 8] = ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"];

/// (label, wire pair, from -> to, time). Wire pairs are listed in wire
/// order; f4 and f5 carry reversed arrows.
pub const QUIZ_BOXES: [(&str, [&str; 2], (&str, &str), u64); 8] = [
    ("f6", ["H2", "H3"], ("H2", "H3"), 1),
    ("f8", ["H4", "H5"], ("H4", "H5"), 2),
    ("f7", ["H3", "H4"], ("H3", "H4"), 3),
    ("f4", ["H3", "H4"], ("H4", "H3"), 4),
    ("f5", ["H2", "H3"], ("H3", "H2"), 5),
    ("f2", ["H2", "H3"], ("H2", "H3"), 6),
    ("f1", ["H1", "H2"], ("H1", "H2"), 7),
    ("f3", ["H3", "H4"], ("H3", "H4"), 8),
];

/// Labels the path enters from below; their action on the line is the
/// entrywise conjugate (invisible for real labels).
pub const QUIZ_CONJUGATED: [&str; 4] = ["f1", "f3", "f5", "f7"];

/// Build the five-wire quiz network with random labels drawn from `rng`.
/// `real_labels` restricts every matrix (and both states) to real entries.
pub fn quiz_network(rng: &mut ChaCha8Rng, real_labels: bool) -> FlowNetwork<Complex64> {
    let draw = |rng: &mut ChaCha8Rng, rows: usize, cols: usize| -> Matrix<Complex64> {
        let m = gen::complex_matrix(rng, rows, cols);
        if real_labels {
            let entries = m.entries().iter().map(|e| Complex64::new(e.re, 0.0)).collect();
            Matrix::from_vec(rows, cols, entries).expect("shape preserved")
        } else {
            m
        }
    };

    let mut morphs = BTreeMap::new();
    for label in QUIZ_LABELS {
        morphs.insert(label.to_string(), draw(rng, 2, 2));
    }

    let boxes = QUIZ_BOXES
        .iter()
        .map(|(label, wires, (from, to), time)| FlowBox {
            kind: BoxKind::Project,
            wires: wires.iter().map(|w| w.to_string()).collect(),
            label: label.to_string(),
            from: Some(from.to_string()),
            to: Some(to.to_string()),
            time: *time,
        })
        .collect();

    FlowNetwork {
        wires: (1..=5).map(|i| Wire { name: format!("H{i}"), dim: 2 }).collect(),
        morphs,
        boxes,
        input_wire: "H1".into(),
        input_state: draw(rng, 2, 1),
        context: Some(draw(rng, 16, 1)),
        output_wire: "H5".into(),
    }
}

/// The closed-form expectation for the quiz network: the two final
/// projector states tensored with the label composite applied to the
/// input, computed entirely with the naive helpers.
///
/// Wire order legs: psi_f1 on (H1, H2), psi_f3 on (H3, H4), and the
/// composite f8 . conj(f7) . f6 . conj(f5) . f4 . conj(f3) . f2 . conj(f1)
/// applied to the input on H5. Passing `conjugate: false` drops the
/// conjugations, giving the plain composite that only agrees for real
/// labels.
pub fn quiz_expected(net: &FlowNetwork<Complex64>, conjugate: bool) -> Vec<C> {
    let label = |name: &str| -> Vec<C> { entries(&net.morphs[name]) };
    let vec_of = |name: &str| -> Vec<C> {
        // State of a projector on its wire pair: component (a, b) of the
        // pair is entry F[b, a] of the from->to label.
        let f = label(name);
        let mut v = vec![(0.0, 0.0); 4];
        for a in 0..2 {
            for b in 0..2 {
                v[a * 2 + b] = f[b * 2 + a];
            }
        }
        v
    };

    let mut composite = vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)];
    for name in QUIZ_LABELS {
        let mut f = label(name);
        if conjugate && QUIZ_CONJUGATED.contains(&name) {
            f = naive_conj(&f);
        }
        composite = naive_matmul(&f, 2, 2, &composite, 2, 2);
    }
    let out = naive_matmul(&composite, 2, 2, &entries(&net.input_state), 2, 1);

    let pair = naive_kron(&vec_of("f1"), 4, 1, &vec_of("f3"), 4, 1);
    naive_kron(&pair, 16, 1, &out, 2, 1)
}

// ─────────────────────────── the chain network ───────────────────────────

/// Three-wire chain: a prepared correlated pair on (y, z) and a projector
/// on (x, y). The line carries the input on x through both labels onto z.
pub fn chain_network<S: ScalarRing>(
    r1: Matrix<S>,
    r2: Matrix<S>,
    input: Matrix<S>,
) -> FlowNetwork<S> {
    let dx = r1.cols();
    let dy = r1.rows();
    let dz = r2.rows();
    assert_eq!(r2.cols(), dy, "chain shapes must compose");
    assert_eq!(input.rows(), dx, "input lives on x");
    let mut morphs = BTreeMap::new();
    morphs.insert("r1".to_string(), r1);
    morphs.insert("r2".to_string(), r2);
    FlowNetwork {
        wires: vec![
            Wire { name: "x".into(), dim: dx },
            Wire { name: "y".into(), dim: dy },
            Wire { name: "z".into(), dim: dz },
        ],
        morphs,
        boxes: vec![
            FlowBox {
                kind: BoxKind::Prepare,
                wires: vec!["y".into(), "z".into()],
                label: "r2".into(),
                from: Some("y".into()),
                to: Some("z".into()),
                time: 1,
            },
            FlowBox {
                kind: BoxKind::Project,
                wires: vec!["x".into(), "y".into()],
                label: "r1".into(),
                from: Some("x".into()),
                to: Some("y".into()),
                time: 2,
            },
        ],
        input_wire: "x".into(),
        input_state: input,
        context: None,
        output_wire: "z".into(),
    }
}

// ──────────────────────── measurement builders ────────────────────────

/// Random composition of `dim` into positive parts, cut at coin flips.
pub fn partition(rng: &mut ChaCha8Rng, dim: usize) -> Vec<usize> {
    let cuts = gen::relation(rng, 1, dim, 0.5);
    let mut parts = Vec::new();
    let mut run = 1;
    for i in 1..dim {
        if *cuts.get(0, i) {
            parts.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    parts.push(run);
    parts
}

pub fn components_for(parts: &[usize]) -> Vec<ObjectType> {
    parts
        .iter()
        .enumerate()
        .map(|(k, p)| {
            if *p == 1 {
                ObjectType::Unit
            } else {
                ObjectType::base(&format!("B{k}"), *p)
            }
        })
        .collect()
}

/// Measurement from a freshly drawn unitary, returning the raw unitary
/// entries and block sizes so the oracle never consults the term side.
pub fn drawn_measurement(rng: &mut ChaCha8Rng, dim: usize) -> (Measurement, Vec<C>, Vec<usize>) {
    let a = ObjectType::base("A", dim);
    let u = gen::unitary(rng, dim);
    let raw = entries(&u);
    let parts = partition(rng, dim);
    let comps = components_for(&parts);
    let cod = ObjectType::biproduct_of(&comps);
    let dec = SpectralDecomposition::new(morphism_prim("u", &a, &cod, &u), comps)
        .expect("codomain is the biproduct of the components");
    let m = Measurement::new(dec, MeasureKind::Nondestructive)
        .expect("nondestructive accepts any components");
    (m, raw, parts)
}

/// Nondegenerate variant: one unit component per dimension, so every
/// branch weight is a scalar.
pub fn drawn_nondegenerate(rng: &mut ChaCha8Rng, dim: usize) -> (Measurement, Vec<C>) {
    let a = ObjectType::base("A", dim);
    let u = gen::unitary(rng, dim);
    let raw = entries(&u);
    let comps = vec![ObjectType::Unit; dim];
    let cod = ObjectType::biproduct_of(&comps);
    let dec = SpectralDecomposition::new(morphism_prim("u", &a, &cod, &u), comps)
        .expect("codomain is the biproduct of the components");
    let m = Measurement::new(dec, MeasureKind::Nondestructive)
        .expect("nondestructive accepts any components");
    (m, raw)
}

/// Born weights straight from the raw unitary: rotate the state and sum
/// `|entry|^2` over each block of rows.
pub fn oracle_weights(raw_u: &[C], parts: &[usize], psi: &[C]) -> Vec<f64> {
    let dim: usize = parts.iter().sum();
    let rotated = naive_matmul(raw_u, dim, dim, psi, dim, 1);
    let mut out = Vec::with_capacity(parts.len());
    let mut row = 0;
    for p in parts {
        let w: f64 = rotated[row..row + p].iter().map(|e| e.0 * e.0 + e.1 * e.1).sum();
        out.push(w);
        row += p;
    }
    out
}

// ─────────────────────────── law shorthands ───────────────────────────

/// `A -> A` around the right-hand zigzag: bend a wire up and back down.
pub fn snake(a: &ObjectType) -> Term {
    Term::pipeline(&[
        Term::Rho(a.clone()),
        Term::tensor(Term::Id(a.clone()), Term::Eta(a.clone())),
        Term::Alpha(a.clone(), a.clone().dual(), a.clone()),
        Term::tensor(Term::Eps(a.clone()), Term::Id(a.clone())),
        Term::inv(Term::Lambda(a.clone())),
    ])
}

/// `A* -> A*` around the opposite zigzag.
pub fn cosnake(a: &ObjectType) -> Term {
    let ad = a.clone().dual();
    Term::pipeline(&[
        Term::Lambda(ad.clone()),
        Term::tensor(Term::Eta(a.clone()), Term::Id(ad.clone())),
        Term::inv(Term::Alpha(ad.clone(), a.clone(), ad.clone())),
        Term::tensor(Term::Id(ad.clone()), Term::Eps(a.clone())),
        Term::inv(Term::Rho(ad)),
    ])
}

/// `sum_i conj(x_i) * y_i`.
pub fn naive_inner(x: &[C], y: &[C]) -> C {
    x.iter().zip(y).fold((0.0, 0.0), |acc, (&a, &b)| cadd(acc, cmul(cconj(a), b)))
}

/// First violated law of a projector family, if any: self-adjointness,
/// orthogonality with idempotence, or completeness.
pub fn projector_family_violation(ps: &[Vec<C>], dim: usize, tol: f64) -> Option<String> {
    let mut sum = vec![(0.0, 0.0); dim * dim];
    for (i, p) in ps.iter().enumerate() {
        if !close(p, &naive_adjoint(p, dim, dim), tol) {
            return Some(format!("projector {i} is not self-adjoint"));
        }
        for (j, q) in ps.iter().enumerate() {
            let prod = naive_matmul(p, dim, dim, q, dim, dim);
            let want = if i == j { p.clone() } else { vec![(0.0, 0.0); dim * dim] };
            if !close(&prod, &want, tol) {
                return Some(format!("P{i} P{j} is not {}", if i == j { "P" } else { "zero" }));
            }
        }
        for (s, e) in sum.iter_mut().zip(p) {
            *s = cadd(*s, *e);
        }
    }
    let mut ident = vec![(0.0, 0.0); dim * dim];
    for k in 0..dim {
        ident[k * dim + k] = (1.0, 0.0);
    }
    if close(&sum, &ident, tol) {
        None
    } else {
        Some("the projectors do not sum to the identity".into())
    }
}
