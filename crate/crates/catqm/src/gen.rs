//! Seeded generators for random instances: complex matrices, unitaries via
//! Gram-Schmidt, relations, states, and spectral decompositions. All
//! randomness flows through a ChaCha stream so identical seeds reproduce
//! identical suites everywhere.

use crate::matrix::Matrix;
use crate::measurement::{Measurement, MeasureKind, SpectralDecomposition};
use crate::object::ObjectType;
use crate::ops::morphism_prim;
use crate::scalar::{BackendKind, ScalarRing};
use crate::term::{ScalarLiteral, Term};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrix with entries drawn for the backend: uniform complex
/// entries in the unit square, or boolean entries at density 1/2.
pub fn backend_matrix<S: ScalarRing>(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<S> {
    let entries = (0..rows * cols)
        .map(|_| {
            let lit = match S::BACKEND {
                BackendKind::FdHilb => {
                    ScalarLiteral::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }
                BackendKind::Rel => ScalarLiteral::real(if rng.random_bool(0.5) { 1.0 } else { 0.0 }),
            };
            S::from_literal(lit).expect("drawn literal fits the backend")
        })
        .collect();
    Matrix::from_vec(rows, cols, entries).expect("generated shape is consistent")
}

/// Random primitive `dom -> cod` with a backend-appropriate matrix.
pub fn prim<S: ScalarRing>(
    rng: &mut ChaCha8Rng,
    name: &str,
    dom: &ObjectType,
    cod: &ObjectType,
) -> Term {
    morphism_prim(name, dom, cod, &backend_matrix::<S>(rng, cod.dim(), dom.dim()))
}

pub fn complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Complex64> {
    let entries = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Matrix::from_vec(rows, cols, entries).expect("generated shape is consistent")
}

/// Random relation with independent entries at the given density.
pub fn relation(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Matrix<bool> {
    let entries = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
    Matrix::from_vec(rows, cols, entries).expect("generated shape is consistent")
}

/// Normalised random complex column.
pub fn state(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<Complex64> {
    loop {
        let v = complex_matrix(rng, dim, 1);
        let norm_sq: f64 = v.entries().iter().map(|e| e.norm_sqr()).sum();
        if norm_sq > 1e-6 {
            let scale = Complex64::new(1.0 / norm_sq.sqrt(), 0.0);
            return v.scale(&scale);
        }
    }
}

/// Random unitary by Gram-Schmidt orthonormalisation of a random matrix.
/// Redraws on near-singular input, so the result is always unitary to
/// machine precision.
pub fn unitary(rng: &mut ChaCha8Rng, dim: usize) -> Matrix<Complex64> {
    'draw: loop {
        let raw = complex_matrix(rng, dim, dim);
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|c| (0..dim).map(|r| *raw.get(r, c)).collect())
            .collect();
        for k in 0..dim {
            for j in 0..k {
                let proj: Complex64 = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
                for r in 0..dim {
                    let adj = cols[j][r] * proj;
                    cols[k][r] -= adj;
                }
            }
            let norm: f64 = cols[k].iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue 'draw;
            }
            for r in 0..dim {
                cols[k][r] /= norm;
            }
        }
        let mut m = Matrix::zeros(dim, dim);
        for c in 0..dim {
            for r in 0..dim {
                m.set(r, c, cols[c][r]);
            }
        }
        return m;
    }
}

/// Random unitary wrapped as an invertible primitive `a -> a` (the declared
/// inverse is the conjugate transpose).
pub fn unitary_prim(rng: &mut ChaCha8Rng, name: &str, a: &ObjectType) -> Term {
    let m = unitary(rng, a.dim());
    match morphism_prim(name, a, a, &m) {
        Term::Prim(mut p) => {
            p.fdhilb_inv = Some(
                m.adjoint()
                    .entries()
                    .iter()
                    .map(|e| crate::term::ScalarLiteral::new(e.re, e.im))
                    .collect(),
            );
            Term::Prim(p)
        }
        _ => unreachable!("morphism_prim returns a primitive"),
    }
}

/// Random destructive measurement on an object: a random unitary onto the
/// biproduct of `dim` units.
pub fn destructive_measurement(rng: &mut ChaCha8Rng, a: &ObjectType) -> Measurement {
    let d = a.dim();
    let comps = vec![ObjectType::Unit; d];
    let cod = ObjectType::biproduct_of(&comps);
    let u = morphism_prim("u", a, &cod, &unitary(rng, d));
    let dec = SpectralDecomposition::new(u, comps).expect("generated decomposition is well typed");
    Measurement::new(dec, MeasureKind::Destructive).expect("unit components")
}

/// Random nondestructive measurement with a random composition of the
/// dimension into biproduct components.
pub fn nondestructive_measurement(rng: &mut ChaCha8Rng, a: &ObjectType) -> Measurement {
    let d = a.dim();
    let mut comps = Vec::new();
    let mut left = d;
    while left > 0 {
        let part = rng.random_range(1..=left);
        comps.push(if part == 1 {
            ObjectType::Unit
        } else {
            ObjectType::base(&format!("C{}", comps.len()), part)
        });
        left -= part;
    }
    let cod = ObjectType::biproduct_of(&comps);
    let u = morphism_prim("u", a, &cod, &unitary(rng, d));
    let dec = SpectralDecomposition::new(u, comps).expect("generated decomposition is well typed");
    Measurement::new(dec, MeasureKind::Nondestructive).expect("nondestructive accepts any components")
}
