use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::blocks::DiracBlocks;
use crate::error::Result;
use crate::numerics::{eigs_of_matrix, Parity, ParityFold};

/// Fraction of eigenvector mass within `|x| <= L/2` for a point eigenvalue.
pub const DIRAC_LOCALIZATION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigenClass {
    NearZero,
    ExactPair2omega,
    EssentialProxy,
    RealUnstable,
    ImaginaryPoint,
    Other,
}

impl EigenClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EigenClass::NearZero => "near-zero",
            EigenClass::ExactPair2omega => "exact-pair-2omega",
            EigenClass::EssentialProxy => "essential-proxy",
            EigenClass::RealUnstable => "real-unstable",
            EigenClass::ImaginaryPoint => "imaginary-point",
            EigenClass::Other => "other",
        }
    }
}

/// Spinor parity class: `P` is (even, odd), `Q` is (odd, even).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinorParity {
    P,
    Q,
}

impl SpinorParity {
    pub fn pattern(self) -> [Parity; 2] {
        match self {
            SpinorParity::P => [Parity::Even, Parity::Odd],
            SpinorParity::Q => [Parity::Odd, Parity::Even],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedEigenvalue {
    pub lambda: Complex64,
    pub class: EigenClass,
    pub localization: f64,
    pub parity: SpinorParity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub omega: f64,
    pub k: u32,
    pub m: f64,
    pub eps_dirac: f64,
    pub points: usize,
    pub half_width: f64,
    pub eigenvalues: Vec<ClassifiedEigenvalue>,
    pub lambda_unstable: Option<f64>,
    pub lambda_ref: Option<f64>,
    /// `λ_ω / ε² - Λ`.
    pub mu0: Option<f64>,
    /// Largest `√|σ|` of the kernel eigenvalues over both parity classes;
    /// zero when no kernel cluster is present.
    pub cluster_radius: f64,
    pub tol0: f64,
    pub tol2: f64,
    /// `min |λ - 2ωi| / (2ω)`.
    pub two_omega_resid: f64,
    /// Largest distance from `-λ` or `conj λ` to the computed set.
    pub symmetry_defect: f64,
    /// Largest eigenpair residual of the folded products.
    pub residual_bound: f64,
}

impl SpectrumReport {
    pub fn with_limit(mut self, lambda_ref: f64) -> Self {
        self.lambda_ref = Some(lambda_ref);
        self.mu0 = self
            .lambda_unstable
            .map(|l| l / (self.eps_dirac * self.eps_dirac) - lambda_ref);
        self
    }

    pub fn count(&self, class: EigenClass) -> usize {
        self.eigenvalues.iter().filter(|e| e.class == class).count()
    }

    /// Real-unstable eigenvalues with positive real part.
    pub fn unstable_pairs(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|e| e.class == EigenClass::RealUnstable && e.lambda.re > 0.0)
            .count()
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "re_lambda,im_lambda,class,localization")?;
        for e in &self.eigenvalues {
            writeln!(
                out,
                "{:.16e},{:.16e},{},{:.16e}",
                e.lambda.re,
                e.lambda.im,
                e.class.as_str(),
                e.localization
            )?;
        }
        Ok(())
    }
}

struct RawEigen {
    sigma: Complex64,
    localization: f64,
    parity: SpinorParity,
}

/// Spectrum of `JL = [[0, L₋], [-L₊, 0]]` through `λ² = σ ∈ σ(-L₋L₊)`,
/// computed separately on each spinor parity class.
pub fn dirac_spectrum(blocks: &DiracBlocks) -> Result<SpectrumReport> {
    let grid = &blocks.grid;
    let n = grid.points();
    let omega = blocks.omega;
    let gap = blocks.m - omega;
    let mut raw = Vec::new();
    let mut residual_bound = 0.0f64;
    let mut cluster_radius = 0.0f64;
    for parity in [SpinorParity::P, SpinorParity::Q] {
        let fold = ParityFold::new(grid, &parity.pattern());
        let prod = -fold
            .fold(blocks.lminus.matrix())
            .dot(&fold.fold(blocks.lplus.matrix()));
        let eig = eigs_of_matrix(&prod, true)?;
        residual_bound = residual_bound.max(eig.residual_bound);
        let vecs = eig.vectors.as_ref().expect("vectors requested");
        let mut smallest = f64::INFINITY;
        for (i, &sigma) in eig.values.iter().enumerate() {
            smallest = smallest.min(sigma.norm());
            let full = fold.unfold(&vecs.column(i).to_vec());
            let localization = grid.interior_mass(|j| full[j].norm_sqr() + full[n + j].norm_sqr());
            raw.push(RawEigen {
                sigma,
                localization,
                parity,
            });
        }
        // Kernel modes sit many orders of magnitude below the gap.
        if smallest.sqrt() < 1e-3 * gap {
            cluster_radius = cluster_radius.max(smallest.sqrt());
        }
    }
    let tol0 = if cluster_radius > 0.0 {
        10.0 * cluster_radius
    } else {
        1e-6 * gap
    };
    let tol2 = 1e-3 * omega;
    let two_omega = Complex64::new(0.0, 2.0 * omega);

    let mut eigenvalues = Vec::with_capacity(2 * raw.len());
    for r in &raw {
        let root = r.sigma.sqrt();
        for lambda in [root, -root] {
            let localized = r.localization >= DIRAC_LOCALIZATION;
            let flat = lambda.re.abs() <= tol0.max(1e-6 * lambda.norm());
            let real = lambda.im.abs() <= tol0.max(1e-6 * lambda.norm());
            let class = if lambda.norm() < tol0 {
                EigenClass::NearZero
            } else if localized
                && ((lambda - two_omega).norm() < tol2 || (lambda + two_omega).norm() < tol2)
            {
                EigenClass::ExactPair2omega
            } else if !localized && flat && lambda.im.abs() >= gap * (1.0 - 1e-6) {
                EigenClass::EssentialProxy
            } else if localized && real {
                EigenClass::RealUnstable
            } else if localized && flat {
                EigenClass::ImaginaryPoint
            } else {
                EigenClass::Other
            };
            eigenvalues.push(ClassifiedEigenvalue {
                lambda,
                class,
                localization: r.localization,
                parity: r.parity,
            });
        }
    }
    eigenvalues.sort_by(|a, b| {
        a.lambda
            .im
            .total_cmp(&b.lambda.im)
            .then(a.lambda.re.total_cmp(&b.lambda.re))
    });

    let two_omega_resid = eigenvalues
        .iter()
        .map(|e| (e.lambda - two_omega).norm())
        .fold(f64::INFINITY, f64::min)
        / (2.0 * omega);
    let values: Vec<Complex64> = eigenvalues.iter().map(|e| e.lambda).collect();
    let symmetry_defect = symmetry_defect(&values);
    let lambda_unstable = eigenvalues
        .iter()
        .filter(|e| e.class == EigenClass::RealUnstable && e.lambda.re > 0.0)
        .map(|e| e.lambda.re)
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.max(x)))
        });

    Ok(SpectrumReport {
        omega,
        k: blocks.k,
        m: blocks.m,
        eps_dirac: (blocks.m * blocks.m - omega * omega).sqrt(),
        points: n,
        half_width: grid.half_width(),
        eigenvalues,
        lambda_unstable,
        lambda_ref: None,
        mu0: None,
        cluster_radius,
        tol0,
        tol2,
        two_omega_resid,
        symmetry_defect,
        residual_bound,
    })
}

/// Largest distance from `-λ` or `conj λ` to the nearest member of the set.
pub fn symmetry_defect(values: &[Complex64]) -> f64 {
    let nearest = |w: Complex64| {
        values
            .iter()
            .map(|z| (z - w).norm())
            .fold(f64::INFINITY, f64::min)
    };
    values
        .iter()
        .map(|&z| nearest(-z).max(nearest(z.conj())))
        .fold(0.0, f64::max)
}
