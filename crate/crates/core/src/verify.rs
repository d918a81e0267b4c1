//! Identity suites with machine-readable reports.
//!
//! Every checked identity is registered in [`identities`] under a suite
//! name. Each one gets its own deterministic RNG derived from the run seed
//! and its name, so reports do not depend on scheduling.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::appell::{
    appell_expand, ck, ck_product, gegenbauer_ck_check, qk_eval_all, qk_symbolic,
    synthesize_appell, tjk, tjk_pochhammer,
};
use crate::error::{Error, Result};
use crate::fueter_map::{
    b_from_c, fmr_convergence_check, fmr_norm_identity, tau_preimage, tau_series,
    tau_series_symbolic, transport_table,
};
use crate::operators::{
    adjoint_defect_m, adjoint_defect_s, annihilate, backward_inequality_check, backward_m,
    backward_m_matches_ck_inverse, backward_r_checked, backward_r_eps_sweep, commutator_difference,
    gamma_commutator, gamma_recurrence_check, max_coeff_norm, number_operator_check,
    shift_isometry_defect, shift_matches_ck_product, shift_norm_defect, WeightedShiftSpec,
};
use crate::poly::{
    ck_extension, embed_q, fueter_operator, hyper_derivative, laplacian4, vector_q, QPoly,
};
use crate::quadrature::{PlaneRule, QuadratureRule};
use crate::quat::{
    sample_sphere_with, ImaginaryUnit, Quaternion, QuaternionExact, QuaternionFloat,
};
use crate::scalar::{factorial_f64, int, rat, Rational};
use crate::spaces::{
    kernel_eval, pointwise_bound, random_exact_quaternion, random_float_quaternion,
    reproducing_check, AppellSeries, SliceSeries, WeightSequence,
};
use crate::transforms::{
    bargmann_bf, bargmann_bf_quadrature, bargmann_bs_inverse, bargmann_bs_inverse_quadrature,
    calibrate_as, coeff_distance, exp_moment, exp_pair_moment, gaussian_moment_slice,
    hermite_functions, kernel_af, kernel_as_closed, kernel_as_series, kernel_l_selfproduct,
    slice_fock_basis, upsilon, upsilon_composite, upsilon_integral, upsilon_integral_at,
    upsilon_unit_spread, L2Function, TransformMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Appell,
    Spaces,
    Operators,
    Transforms,
    Fmr,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] = [
        Suite::Appell,
        Suite::Spaces,
        Suite::Operators,
        Suite::Transforms,
        Suite::Fmr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Appell => "appell",
            Suite::Spaces => "spaces",
            Suite::Operators => "operators",
            Suite::Transforms => "transforms",
            Suite::Fmr => "fmr",
        }
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "appell" => Ok(Suite::Appell),
            "spaces" => Ok(Suite::Spaces),
            "operators" => Ok(Suite::Operators),
            "transforms" => Ok(Suite::Transforms),
            "fmr" => Ok(Suite::Fmr),
            other => Err(Error::Parse(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Md,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "md" => Ok(OutputFormat::Md),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Run parameters, loadable from a JSON file. Missing keys take defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Largest degree `N` used by the symbolic checks.
    pub degree_cap: usize,
    pub tolerance: f64,
    pub hermite_nodes: usize,
    pub plane_radial: usize,
    pub plane_angular: usize,
    pub legendre_nodes: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

pub const MAX_DEGREE_CAP: usize = 24;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            degree_cap: 12,
            tolerance: 1e-10,
            hermite_nodes: 80,
            plane_radial: 64,
            plane_angular: 128,
            legendre_nodes: 64,
            seed: 0,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree_cap > MAX_DEGREE_CAP {
            return Err(Error::Domain(format!(
                "degree cap {} exceeds {MAX_DEGREE_CAP}",
                self.degree_cap
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        if self.hermite_nodes == 0
            || self.plane_radial == 0
            || self.plane_angular == 0
            || self.legendre_nodes == 0
        {
            return Err(Error::Domain("quadrature sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Deliberate corruption used as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaFault {
    /// Replaces `γ_1` in the weighted shift under test.
    pub gamma_1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub statement: String,
    pub instances: usize,
    pub max_defect: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<GammaFault>,
    pub results: Vec<IdentityReport>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,instances,max_defect,pass\n");
        for r in &self.results {
            out.push_str(&format!(
                "{},{},{:e},{}\n",
                r.identity, r.instances, r.max_defect, r.pass
            ));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "suite `{}`, seed {}: {}\n\n| identity | statement | instances | max defect | pass |\n|---|---|---|---|---|\n",
            self.suite,
            self.seed,
            if self.pass { "pass" } else { "FAIL" }
        );
        for r in &self.results {
            out.push_str(&format!(
                "| {} | {} | {} | {:e} | {} |\n",
                r.identity,
                r.statement.replace('|', "\\|"),
                r.instances,
                r.max_defect,
                if r.pass { "yes" } else { "no" }
            ));
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Md => self.to_markdown(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.results.iter().filter(|r| !r.pass)
    }
}

/// What one identity check measured.
struct Outcome {
    instances: usize,
    max_defect: f64,
    threshold: f64,
    detail: Option<String>,
}

impl Outcome {
    fn new(instances: usize, max_defect: f64, threshold: f64) -> Self {
        Outcome {
            instances,
            max_defect,
            threshold,
            detail: None,
        }
    }

    /// Exact identities: the defect is the number of failing instances.
    fn exact(instances: usize, failures: usize) -> Self {
        Outcome::new(instances, failures as f64, 0.0)
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

struct Context {
    config: RunConfig,
    fault: Option<GammaFault>,
}

impl Context {
    fn rng(&self, name: &str) -> ChaCha8Rng {
        // FNV-1a over the identity name keeps streams independent.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in name.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.config.seed ^ h)
    }

    fn n(&self) -> usize {
        self.config.degree_cap
    }

    fn tol(&self) -> f64 {
        self.config.tolerance
    }

    fn hermite(&self) -> QuadratureRule {
        QuadratureRule::gauss_hermite(self.config.hermite_nodes)
    }

    fn plane(&self) -> PlaneRule {
        PlaneRule::new(self.config.plane_radial, self.config.plane_angular)
    }
}

type Check = fn(&Context, &mut ChaCha8Rng) -> Result<Outcome>;

/// A registered identity.
pub struct Identity {
    pub suite: Suite,
    pub name: &'static str,
    pub statement: &'static str,
    check: Check,
}

macro_rules! identity {
    ($suite:ident, $name:literal, $statement:literal, $check:expr) => {
        Identity {
            suite: Suite::$suite,
            name: $name,
            statement: $statement,
            check: $check,
        }
    };
}

/// The manifest of all checked identities, in report order.
pub fn identities() -> Vec<Identity> {
    vec![
        identity!(
            Appell,
            "fueter-regularity",
            "∂ Q_k = 0 for k <= N",
            check_regularity
        ),
        identity!(
            Appell,
            "appell-property",
            "(∂̄/2) Q_k = k Q_{k-1} for 1 <= k <= N",
            check_appell_property
        ),
        identity!(
            Appell,
            "tjk-row-sums",
            "Σ_j T^k_j = 1 for k <= 64",
            check_row_sums
        ),
        identity!(
            Appell,
            "tjk-pochhammer",
            "T^k_j equals its Pochhammer form for k <= 64",
            check_pochhammer
        ),
        identity!(
            Appell,
            "ck-pairing",
            "c_{2m} = c_{2m-1} for 1 <= m <= 32",
            check_ck_pairing
        ),
        identity!(
            Appell,
            "ck-restriction",
            "Q_k = c_k v^k on x0 = 0 for k <= N",
            check_restriction
        ),
        identity!(
            Appell,
            "ck-extension",
            "CK(h) restricts to h and is regular for x0-free h of degree <= 8",
            check_ck_extension
        ),
        identity!(
            Appell,
            "ck-product",
            "Q_k ⊙ Q_s = (c_k c_s / c_{k+s}) Q_{k+s} for k + s <= N",
            check_ck_product
        ),
        identity!(
            Appell,
            "monomial-fueter-image",
            "Δ q^k = -2(k-1)k Q_{k-2} for 2 <= k <= N + 2",
            check_monomial_image
        ),
        identity!(
            Appell,
            "qk-modulus-bound",
            "|Q_k(q)| <= |q|^k for k <= 20 at 1000 points",
            check_modulus_bound
        ),
        identity!(
            Appell,
            "real-axis-powers",
            "Q_k(t) = t^k for real t",
            check_real_axis
        ),
        identity!(
            Appell,
            "ring-evaluation-real",
            "(ab)(t) = a(t) b(t) for real t",
            check_ring_eval
        ),
        identity!(
            Appell,
            "appell-expand-roundtrip",
            "expanding Σ Q_k α_k returns α for length <= N + 1",
            check_expand_roundtrip
        ),
        identity!(
            Appell,
            "gegenbauer-form",
            "CK(v^n) is a constant multiple of the Gegenbauer form",
            check_gegenbauer
        ),
        identity!(
            Spaces,
            "orthonormal-basis",
            "⟨Q_k/√w_k, Q_j/√w_j⟩ = δ_kj for k, j <= 20 per weight",
            check_orthonormal
        ),
        identity!(
            Spaces,
            "inner-hermitian",
            "⟨f, g⟩ = conj⟨g, f⟩ and ⟨f, gλ⟩ = ⟨f, g⟩λ",
            check_inner_hermitian
        ),
        identity!(
            Spaces,
            "pointwise-bound",
            "|f(q)| <= (Σ |q|^{2k}/w_k)^{1/2} ‖f‖ at 500 pairs per weight",
            check_pointwise_bound
        ),
        identity!(
            Spaces,
            "kernel-closed-forms",
            "K_fock(x, y) = e^{xy} and K_hardy(x, y) = 1/(1 - xy) on a 20x20 grid",
            check_kernel_closed_forms
        ),
        identity!(
            Spaces,
            "kernel-tail-honest",
            "|K_{N+10} - K_N| <= reported tail at 100 points per weight",
            check_kernel_tail
        ),
        identity!(
            Spaces,
            "kernel-hermitian",
            "K(q, p) = conj K(p, q)",
            check_kernel_hermitian
        ),
        identity!(
            Spaces,
            "reproducing-property",
            "⟨K_p, f⟩ = f(p) at 100 pairs per weight",
            check_reproducing
        ),
        identity!(
            Operators,
            "shift-ck-product",
            "S Q_k = (c_{k+1}/(c_1 c_k)) Q_1 ⊙ Q_k for k <= 10",
            check_shift_ck
        ),
        identity!(
            Operators,
            "backward-ck-inverse",
            "Q_1 ⊙ Q_{k-1} = (c_1 c_{k-1}/c_k) Q_k for 1 <= k <= 8",
            check_backward_ck
        ),
        identity!(
            Operators,
            "annihilation-derivative",
            "coefficient ∂̄/2 agrees with the polynomial operator for N <= 12",
            check_annihilation
        ),
        identity!(
            Operators,
            "commutator-identity",
            "(∂̄/2) S - S (∂̄/2) = I on series with N <= 64",
            check_commutator
        ),
        identity!(
            Operators,
            "number-operator",
            "S (∂̄/2) Q_k = k Q_k for k <= 20",
            check_number_operator
        ),
        identity!(
            Operators,
            "adjoint-shift-fock",
            "⟨(∂̄/2) f, g⟩ = ⟨f, S g⟩ in the Fock space on 200 pairs",
            check_adjoint_s
        ),
        identity!(
            Operators,
            "adjoint-backward-hardy",
            "⟨M f, g⟩ = ⟨f, S g⟩ in the Hardy space on 200 pairs",
            check_adjoint_m
        ),
        identity!(
            Operators,
            "shift-isometry-hardy",
            "‖S f‖ = ‖f‖ in the Hardy space",
            check_shift_isometry
        ),
        identity!(
            Operators,
            "shift-norm-fock",
            "‖S f‖² = ‖(∂̄/2) f‖² + ‖f‖² in the Fock space",
            check_shift_norm
        ),
        identity!(
            Operators,
            "backward-integral",
            "the integral backward shift equals M on 100 series; partial integrals give (1 - ε^k)",
            check_backward_integral
        ),
        identity!(
            Operators,
            "backward-inequality",
            "‖R f‖² <= ‖f‖² - |f(0)|², with equality for Hardy",
            check_backward_inequality
        ),
        identity!(
            Operators,
            "gamma-recurrence",
            "(k+1) γ_k - k γ_{k-1} = 1 for the weighted shift under test",
            check_gamma_recurrence
        ),
        identity!(
            Operators,
            "gamma-commutator",
            "(∂̄/2)T_γ - T_γ(∂̄/2) = I iff the γ recurrence holds, on 50 random γ",
            check_gamma_commutator
        ),
        identity!(
            Transforms,
            "hermite-orthonormality",
            "∫ η_m η_n = δ_mn for m, n <= 40",
            check_hermite_orthonormal
        ),
        identity!(
            Transforms,
            "gaussian-moments",
            "∫ z̄^k z^j dμ = k! δ_kj for k, j <= 12",
            check_moments
        ),
        identity!(
            Transforms,
            "kernel-as-closed-form",
            "Σ q^k η_k(x)/√k! equals a calibrated exp(-(q² + x²)/2 + √2 qx)",
            check_kernel_as
        ),
        identity!(
            Transforms,
            "kernel-af-real-axis",
            "A^F(t, x) = A^S(t, x) for real t",
            check_kernel_af_real
        ),
        identity!(
            Transforms,
            "kernel-af-tail-honest",
            "|A^F_{K+10} - A^F_K| <= reported tail at 100 points",
            check_kernel_af_tail
        ),
        identity!(
            Transforms,
            "bargmann-hermite-image",
            "B^F η_k = Q_k/√k!",
            check_bf_hermite
        ),
        identity!(
            Transforms,
            "bargmann-isometry",
            "‖B^F φ‖ = ‖φ‖ on 200 φ, coefficient and quadrature modes",
            check_bf_isometry
        ),
        identity!(
            Transforms,
            "slice-inverse-basis",
            "(B^S)^{-1}(q^n/√n!) = η_n in both modes",
            check_bs_basis
        ),
        identity!(
            Transforms,
            "slice-inverse-isometry",
            "(B^S)^{-1} preserves norms on 100 slice series",
            check_bs_isometry
        ),
        identity!(
            Transforms,
            "upsilon-basis",
            "Υ(q^n/√n!) = Q_n/√n!",
            check_upsilon_basis
        ),
        identity!(
            Transforms,
            "upsilon-modes",
            "Υ direct = integral = B^F ∘ (B^S)^{-1} on 100 series",
            check_upsilon_modes
        ),
        identity!(
            Transforms,
            "upsilon-unit-independence",
            "integral Υ agrees across 5 imaginary units on 50 series",
            check_upsilon_units
        ),
        identity!(
            Transforms,
            "kernel-l-selfproduct",
            "∫ L(q, z) conj L(p, z) dμ = K_fock(q, p) and its real-axis corollaries",
            check_kernel_l
        ),
        identity!(
            Fmr,
            "tau-commuting-square",
            "coefficient τ equals the expanded Laplacian for N <= 12",
            check_tau_square
        ),
        identity!(
            Fmr,
            "fmr-norm-identity",
            "‖τ f‖_b = 2(‖f‖²_c - |f(0)|² - c_1|f'(0)|²)^{1/2} on 500 series per weight",
            check_fmr_norm
        ),
        identity!(
            Fmr,
            "fmr-isometry-corollary",
            "‖τ f‖_b = 2‖f‖_c when a_0 = a_1 = 0",
            check_fmr_corollary
        ),
        identity!(
            Fmr,
            "tau-surjectivity",
            "every Appell series of truncation <= 12 has an explicit τ preimage",
            check_surjectivity
        ),
        identity!(
            Fmr,
            "transported-weight-forms",
            "b_k closed forms for Hardy, Fock, Dirichlet, Bergman match the transport for k <= 32",
            check_transport_table
        ),
        identity!(
            Fmr,
            "fmr-convergence",
            "term ratios of Σ |q|^{2k}/b_k tend to a limit <= |q|²",
            check_fmr_convergence
        ),
    ]
}

/// Runs every identity of `suite`; identities run in parallel and the
/// report keeps manifest order.
pub fn run_suite(suite: Suite, config: &RunConfig, fault: Option<GammaFault>) -> Result<Report> {
    config.validate()?;
    let ctx = Context {
        config: config.clone(),
        fault,
    };
    let selected: Vec<Identity> = identities()
        .into_iter()
        .filter(|i| suite.includes(i.suite))
        .collect();
    let results: Vec<IdentityReport> = selected
        .par_iter()
        .map(|id| {
            let mut rng = ctx.rng(id.name);
            let (instances, max_defect, pass, detail) = match (id.check)(&ctx, &mut rng) {
                Ok(o) => (
                    o.instances,
                    o.max_defect,
                    o.max_defect <= o.threshold,
                    o.detail,
                ),
                Err(e) => (0, f64::INFINITY, false, Some(format!("{}: {e}", e.name()))),
            };
            IdentityReport {
                identity: id.name.to_string(),
                statement: id.statement.to_string(),
                instances,
                max_defect,
                pass,
                detail,
            }
        })
        .collect();
    let pass = results.iter().all(|r| r.pass);
    Ok(Report {
        suite,
        seed: config.seed,
        config: config.clone(),
        fault,
        results,
        pass,
    })
}

fn poly_defect(a: &QPoly, b: &QPoly) -> f64 {
    a.sub(b).terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
}

fn random_point<R: Rng>(rng: &mut R, radius: f64) -> QuaternionFloat {
    let u = sample_sphere_with(rng);
    let dir = Quaternion::new(rng.gen_range(-1.0..1.0), 1.0, 0.0, 0.0);
    let q = u.slice_point(dir.x0, rng.gen_range(-1.0..1.0));
    let n = q.norm().max(1e-300);
    q.scale(&(radius * rng.gen_range(0.0..1.0f64).sqrt() / n))
}

fn admissible_radius(w: &WeightSequence, fallback: f64) -> f64 {
    w.radius().map(|r| 0.95 * r).unwrap_or(fallback)
}

// ---- appell ----

fn check_regularity(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for k in 0..=ctx.n() {
        worst = worst.max(poly_defect(
            &fueter_operator(&qk_symbolic(k)?),
            &QPoly::zero(),
        ));
    }
    Ok(Outcome::new(ctx.n() + 1, worst, 0.0))
}

fn check_appell_property(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for k in 1..=ctx.n() {
        let lhs = hyper_derivative(&qk_symbolic(k)?);
        let rhs = qk_symbolic(k - 1)?.scale(&int(k as i64));
        worst = worst.max(poly_defect(&lhs, &rhs));
    }
    Ok(Outcome::new(ctx.n(), worst, 0.0))
}

fn check_row_sums(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    for k in 0..=64 {
        let mut s = Rational::zero();
        for j in 0..=k {
            s += tjk(k, j)?;
        }
        if !s.is_one() {
            fails += 1;
        }
    }
    Ok(Outcome::exact(65, fails))
}

fn check_pochhammer(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let mut count = 0;
    for k in 0..=64 {
        for j in 0..=k {
            count += 1;
            if tjk(k, j)? != tjk_pochhammer(k, j)? {
                fails += 1;
            }
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_ck_pairing(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let fails = (1..=32).filter(|&m| ck(2 * m) != ck(2 * m - 1)).count();
    Ok(Outcome::exact(32, fails))
}

fn check_restriction(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let v = vector_q();
    let mut vk = QPoly::one();
    for k in 0..=ctx.n() {
        if k > 0 {
            vk = vk.checked_mul(&v)?;
        }
        worst = worst.max(poly_defect(
            &qk_symbolic(k)?.restrict_x0(),
            &vk.scale(&ck(k)),
        ));
    }
    Ok(Outcome::new(ctx.n() + 1, worst, 0.0))
}

fn random_x0_free(rng: &mut ChaCha8Rng, degree: u32) -> QPoly {
    let mut terms = Vec::new();
    for _ in 0..6 {
        let d = rng.gen_range(0..=degree);
        let a = rng.gen_range(0..=d);
        let b = rng.gen_range(0..=d - a);
        terms.push(([0, a, b, d - a - b], random_exact_quaternion(rng, 4)));
    }
    QPoly::from_terms(terms)
}

fn check_ck_extension(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let count = 20;
    for _ in 0..count {
        let h = random_x0_free(rng, 8);
        let e = ck_extension(&h)?;
        worst = worst
            .max(poly_defect(&e.restrict_x0(), &h))
            .max(poly_defect(&fueter_operator(&e), &QPoly::zero()));
    }
    Ok(Outcome::new(count, worst, 0.0))
}

fn check_ck_product(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let n = ctx.n();
    let pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|k| (0..=n - k).map(move |s| (k, s)))
        .filter(|(k, s)| k <= s)
        .collect();
    let worst = pairs
        .par_iter()
        .map(|&(k, s)| -> Result<f64> {
            let lhs = ck_product(&qk_symbolic(k)?, &qk_symbolic(s)?)?;
            let rhs = qk_symbolic(k + s)?.scale(&(ck(k) * ck(s) / ck(k + s)));
            // The product is commutative on Appell polynomials.
            let swapped = ck_product(&qk_symbolic(s)?, &qk_symbolic(k)?)?;
            Ok(poly_defect(&lhs, &rhs).max(poly_defect(&swapped, &rhs)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(Outcome::new(pairs.len(), worst, 0.0))
}

fn check_monomial_image(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let q = embed_q();
    let mut worst: f64 = 0.0;
    let top = ctx.n() + 2;
    for k in 2..=top {
        let lhs = laplacian4(&q.pow_capped(k as u32, top as u32)?);
        let rhs = qk_symbolic(k - 2)?.scale(&int(-2 * (k as i64 - 1) * k as i64));
        worst = worst.max(poly_defect(&lhs, &rhs));
    }
    Ok(Outcome::new(top - 1, worst, 0.0))
}

fn check_modulus_bound(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let q = random_float_quaternion(rng).scale(&1.5);
        let r = q.norm();
        for (k, v) in qk_eval_all(&q, 20).iter().enumerate() {
            let bound = r.powi(k as i32);
            worst = worst.max((v.norm() - bound) / bound.max(1e-300));
        }
    }
    Ok(Outcome::new(1000, worst.max(0.0), 1e-13))
}

fn check_real_axis(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let count = 10;
    for _ in 0..count {
        let t = QuaternionExact::from_real(rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)));
        for k in 0..=ctx.n() {
            if qk_symbolic(k)?.eval(&t) != t.pow(k as u32) {
                fails += 1;
            }
        }
    }
    Ok(Outcome::exact(count * (ctx.n() + 1), fails))
}

fn check_ring_eval(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 20;
    let mut fails = 0;
    for _ in 0..count {
        let a = crate::appell::synthesize_slice(&[
            random_exact_quaternion(rng, 3),
            random_exact_quaternion(rng, 3),
        ])?
        .add(&random_x0_free(rng, 3));
        let b = random_x0_free(rng, 3).add(&QPoly::var(0));
        let t = QuaternionExact::from_real(rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
        if a.checked_mul(&b)?.eval(&t) != &a.eval(&t) * &b.eval(&t) {
            fails += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_expand_roundtrip(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 12;
    let mut fails = 0;
    for i in 0..count {
        let len = 1 + i % (ctx.n() + 1);
        let mut alpha: Vec<QuaternionExact> =
            (0..len).map(|_| random_exact_quaternion(rng, 5)).collect();
        while alpha.last().is_some_and(|a| a.is_zero()) {
            alpha.pop();
        }
        if appell_expand(&synthesize_appell(&alpha)?)? != alpha {
            fails += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_gegenbauer(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let top = ctx.n().clamp(1, 10);
    let mut worst: f64 = 0.0;
    let mut constants = Vec::new();
    for n in 1..=top {
        let fit = gegenbauer_ck_check(n)?;
        worst = worst.max(fit.residual / fit.constant.abs().max(1.0));
        constants.push(format!("{n}:{:.12}", fit.constant));
    }
    Ok(Outcome::new(top, worst, ctx.tol())
        .with_detail(format!("fitted constants {}", constants.join(" "))))
}

// ---- spaces ----

fn check_orthonormal(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        for k in 0..=20 {
            for j in 0..=20 {
                count += 1;
                let ip = AppellSeries::<Rational>::unit(k, w.clone())
                    .inner(&AppellSeries::unit(j, w.clone()))?;
                let normalized = ip.scale(&(Rational::one() / w.value(k)));
                let expect = if k == j {
                    QuaternionExact::one()
                } else {
                    QuaternionExact::zero()
                };
                if normalized != expect {
                    fails += 1;
                }
            }
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_inner_hermitian(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let count = 40;
    for i in 0..count {
        let w = WeightSequence::named_weights()[i % 4].clone();
        let f = AppellSeries::random_exact(rng, 6, w.clone(), 5);
        let g = AppellSeries::random_exact(rng, 8, w, 5);
        let lam = random_exact_quaternion(rng, 5);
        let fg = f.inner(&g)?;
        let ff = f.inner(&f)?;
        if fg != g.inner(&f)?.conj()
            || f.inner(&g.right_mul(&lam))? != &fg * &lam
            || !ff.vector().is_zero()
            || ff.x0 < Rational::zero()
        {
            fails += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_pointwise_bound(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        let r = admissible_radius(&w, 3.0);
        for _ in 0..500 {
            let len = rng.gen_range(0..16);
            let f = AppellSeries::random_float(rng, len, w.clone());
            let q = random_point(rng, r);
            let bound = pointwise_bound(&f, &q)?;
            worst = worst.max((f.eval(&q).norm() - bound) / bound.max(1e-300));
            count += 1;
        }
    }
    Ok(Outcome::new(count, worst.max(0.0), 1e-13))
}

fn check_kernel_closed_forms(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let grid = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / 19.0;
    for a in 0..20 {
        for b in 0..20 {
            let (x, y) = (grid(-2.0, 2.0, a), grid(-2.0, 2.0, b));
            let (v, tail) = kernel_eval(
                &WeightSequence::fock(),
                &QuaternionFloat::from_real(x),
                &QuaternionFloat::from_real(y),
                40,
            )?;
            worst = worst.max(v.dist(&QuaternionFloat::from_real((x * y).exp())) - tail);
            let (x, y) = (grid(-0.9, 0.9, a), grid(-0.9, 0.9, b));
            let (v, tail) = kernel_eval(
                &WeightSequence::hardy(),
                &QuaternionFloat::from_real(x),
                &QuaternionFloat::from_real(y),
                200,
            )?;
            worst = worst.max(v.dist(&QuaternionFloat::from_real(1.0 / (1.0 - x * y))) - tail);
        }
    }
    Ok(Outcome::new(800, worst.max(0.0), 1e-10))
}

fn check_kernel_tail(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        let r = admissible_radius(&w, 2.0);
        for _ in 0..100 {
            let q = random_point(rng, r);
            let p = random_point(rng, r);
            let n = rng.gen_range(4..20);
            let (a, tail) = kernel_eval(&w, &q, &p, n)?;
            let (b, _) = kernel_eval(&w, &q, &p, n + 10)?;
            worst = worst.max(a.dist(&b) - tail);
            count += 1;
        }
    }
    Ok(Outcome::new(count, worst.max(0.0), 1e-14))
}

fn check_kernel_hermitian(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        let r = admissible_radius(&w, 2.0);
        for _ in 0..25 {
            let q = random_point(rng, r);
            let p = random_point(rng, r);
            let (a, _) = kernel_eval(&w, &q, &p, 15)?;
            let (b, _) = kernel_eval(&w, &p, &q, 15)?;
            worst = worst.max(a.dist(&b.conj()));
            count += 1;
        }
    }
    Ok(Outcome::new(count, worst, 1e-12))
}

fn check_reproducing(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        let r = admissible_radius(&w, 1.5);
        for _ in 0..100 {
            let len = rng.gen_range(0..14);
            let f = AppellSeries::random_float(rng, len, w.clone());
            let p = random_point(rng, r);
            worst = worst.max(reproducing_check(&p, &f)?);
            count += 1;
        }
    }
    Ok(Outcome::new(count, worst, 1e-12))
}

// ---- operators ----

fn check_shift_ck(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    Ok(Outcome::exact(
        11,
        usize::from(!shift_matches_ck_product(10)?),
    ))
}

fn check_backward_ck(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    Ok(Outcome::exact(
        8,
        usize::from(!backward_m_matches_ck_inverse(8)?),
    ))
}

fn check_annihilation(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 10;
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let n = i % (ctx.n().min(12) + 1);
        let f = AppellSeries::random_exact(rng, n, WeightSequence::hardy(), 4);
        let lhs = hyper_derivative(&synthesize_appell(f.coeffs())?);
        let rhs = synthesize_appell(annihilate(&f).coeffs())?;
        worst = worst.max(poly_defect(&lhs, &rhs));
    }
    Ok(Outcome::new(count, worst, 0.0))
}

fn check_commutator(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 100;
    let mut fails = 0;
    for _ in 0..count {
        let n = rng.gen_range(0..=64);
        let f = AppellSeries::random_exact(rng, n, WeightSequence::fock(), 9);
        if commutator_difference(&f).truncated(n) != f {
            fails += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_number_operator(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    Ok(Outcome::exact(21, usize::from(!number_operator_check(20))))
}

fn check_adjoint_s(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let w = WeightSequence::fock();
        let (n, m) = (rng.gen_range(0..16), rng.gen_range(0..16));
        let d = if i % 2 == 0 {
            let f = AppellSeries::random_exact(rng, n, w.clone(), 6);
            let g = AppellSeries::random_exact(rng, m, w, 6);
            adjoint_defect_s(&f, &g)?
        } else {
            let f = AppellSeries::random_float(rng, n, w.clone());
            let g = AppellSeries::random_float(rng, m, w);
            let scale = f.norm() * g.norm() * (n.max(m) as f64 + 1.0);
            adjoint_defect_s(&f, &g)? / scale.max(1.0)
        };
        worst = worst.max(d);
    }
    Ok(Outcome::new(200, worst, 1e-12))
}

fn check_adjoint_m(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let w = WeightSequence::hardy();
        let len = rng.gen_range(0..16);
        let f = AppellSeries::random_exact(rng, len, w.clone(), 6);
        let len = rng.gen_range(0..16);
        let g = AppellSeries::random_exact(rng, len, w, 6);
        worst = worst.max(adjoint_defect_m(&f, &g)?);
    }
    Ok(Outcome::new(200, worst, 0.0))
}

fn check_shift_isometry(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 100;
    let fails = (0..count)
        .filter(|_| {
            let len = rng.gen_range(0..24);
            let f = AppellSeries::random_exact(rng, len, WeightSequence::hardy(), 7);
            !shift_isometry_defect(&f).is_zero()
        })
        .count();
    Ok(Outcome::exact(count, fails))
}

fn check_shift_norm(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 100;
    let fails = (0..count)
        .filter(|_| {
            let len = rng.gen_range(0..24);
            let f = AppellSeries::random_exact(rng, len, WeightSequence::fock(), 7);
            !shift_norm_defect(&f).is_zero()
        })
        .count();
    Ok(Outcome::exact(count, fails))
}

fn check_backward_integral(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let nodes = ctx.config.legendre_nodes;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let len = rng.gen_range(0..=ctx.n().max(10));
        let f = AppellSeries::random_float(rng, len, WeightSequence::hardy());
        let r = backward_r_checked(&f, nodes, ctx.tol())?;
        worst = worst.max(max_coeff_norm(&r.sub(&backward_m(&f))?));
        for (_, d) in backward_r_eps_sweep(&f, nodes, &[1e-2, 1e-4, 1e-6])? {
            worst = worst.max(d);
        }
    }
    Ok(Outcome::new(100, worst, ctx.tol()))
}

fn check_backward_inequality(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 100;
    let mut fails = 0;
    for i in 0..count {
        let len = 1 + rng.gen_range(0..14);
        let f = AppellSeries::random_exact(rng, len, WeightSequence::hardy(), 6);
        if i % 2 == 0 {
            let c = backward_inequality_check(&f, 0.0)?;
            if !(c.holds && c.equality) {
                fails += 1;
            }
        } else {
            // Strict for Fock as soon as some α_k with k >= 2 is nonzero.
            let mut coeffs = f.coeffs().to_vec();
            coeffs.resize(coeffs.len().max(3), QuaternionExact::zero());
            if coeffs[2].is_zero() {
                coeffs[2] = QuaternionExact::one();
            }
            let g = AppellSeries::new(coeffs, WeightSequence::fock());
            let c = backward_inequality_check(&g, 0.0)?;
            if !c.holds || c.equality {
                fails += 1;
            }
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_gamma_recurrence(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let kmax = 20;
    let mut gamma = vec![1.0; kmax + 1];
    if let Some(f) = ctx.fault {
        gamma[1] = f.gamma_1;
    }
    let spec = WeightedShiftSpec::new(gamma)?;
    let c = gamma_recurrence_check(&spec, kmax, 1e-12)?;
    let out = Outcome::new(kmax, c.max_defect, 1e-12);
    Ok(match c.first_failure {
        Some(k) => out.with_detail(format!("recurrence fails first at k = {k}")),
        None => out,
    })
}

fn check_gamma_commutator(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 50;
    let kmax = 12;
    let mut mismatches = 0;
    let mut bracket: f64 = 0.0;
    for i in 0..count {
        let mut gamma = vec![int(1); kmax + 2];
        if i % 2 == 1 {
            let k = rng.gen_range(1..=kmax);
            gamma[k] = rat(rng.gen_range(1..=20), rng.gen_range(1..=7));
        }
        let spec = WeightedShiftSpec::new(gamma)?;
        let holds = gamma_recurrence_check(&spec, kmax, 0.0)?.holds;
        let f = AppellSeries::random_exact(rng, kmax, WeightSequence::fock(), 5);
        // Nonzero coefficients everywhere, so a failing γ_k cannot hide.
        let f = AppellSeries::new(
            f.coeffs()
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        QuaternionExact::one()
                    } else {
                        c.clone()
                    }
                })
                .collect(),
            f.weight().clone(),
        );
        let r = gamma_commutator(&spec, &f)?;
        bracket = bracket.max(r.bracket_size);
        if (r.difference_defect == 0.0) != holds {
            mismatches += 1;
        }
    }
    Ok(Outcome::exact(count, mismatches).with_detail(format!(
        "largest bracket of the two composites: {bracket:e}"
    )))
}

// ---- transforms ----

fn check_hermite_orthonormal(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rule = ctx.hermite();
    let k = 40.min(rule.len().saturating_sub(1));
    let mut gram = vec![vec![0.0; k + 1]; k + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let e = hermite_functions(x, k);
        let s = w * (x * x).exp();
        for m in 0..=k {
            for n in 0..=k {
                gram[m][n] += s * e[m] * e[n];
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (m, row) in gram.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            worst = worst.max((v - if m == n { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(Outcome::new((k + 1) * (k + 1), worst, ctx.tol()))
}

fn check_moments(ctx: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rule = ctx.plane();
    let mut worst: f64 = 0.0;
    for k in 0..=12 {
        for j in 0..=12 {
            let m = gaussian_moment_slice(k, j, &rule, &ImaginaryUnit::i())?;
            let scale = (factorial_f64(k) * factorial_f64(j)).sqrt();
            let target = if k == j { factorial_f64(k) } else { 0.0 };
            worst = worst.max(m.dist(&QuaternionFloat::from_real(target)) / scale);
        }
    }
    Ok(Outcome::new(169, worst, ctx.tol()))
}

fn check_kernel_as(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let c = calibrate_as();
    let mut worst: f64 = 0.0;
    for a in 0..20 {
        for b in 0..20 {
            let r = 2.0 * a as f64 / 19.0;
            let x = -3.0 + 6.0 * b as f64 / 19.0;
            let theta = 0.37 * (a * 20 + b) as f64;
            let q = Quaternion::new(
                r * theta.cos(),
                r * theta.sin() * 0.6,
                r * theta.sin() * 0.8,
                0.0,
            );
            let (s, tail) = kernel_as_series(&q, x, 60);
            worst = worst.max(s.dist(&kernel_as_closed(&q, x).scale(&c)) - tail);
        }
    }
    Ok(
        Outcome::new(400, worst.max(0.0), 1e-10)
            .with_detail(format!("calibration constant {c:.16}")),
    )
}

fn check_kernel_af_real(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = QuaternionFloat::from_real(rng.gen_range(-2.0..2.0));
        let x = rng.gen_range(-3.0..3.0);
        worst = worst.max(kernel_af(&t, x, 40).0.dist(&kernel_as_series(&t, x, 40).0));
    }
    Ok(Outcome::new(100, worst, 1e-10))
}

fn check_kernel_af_tail(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..100 {
        let q = random_point(rng, 2.0);
        let x = rng.gen_range(-3.0..3.0);
        let k = rng.gen_range(4..20);
        let (a, tail) = kernel_af(&q, x, k);
        let (b, _) = kernel_af(&q, x, k + 10);
        worst = worst.max(a.dist(&b) - tail);
    }
    Ok(Outcome::new(100, worst.max(0.0), 1e-14))
}

fn check_bf_hermite(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for k in 0..=16 {
        let f = bargmann_bf(&L2Function::hermite(k), 16);
        let expect = AppellSeries::<f64>::unit(k, WeightSequence::fock())
            .scale(&(1.0 / factorial_f64(k).sqrt()))
            .truncated(16);
        worst = worst.max(coeff_distance(f.coeffs(), expect.coeffs()));
    }
    Ok(Outcome::new(17, worst, 1e-15))
}

fn check_bf_isometry(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let rule = ctx.hermite();
    let mut exact_worst: f64 = 0.0;
    let mut quad_worst: f64 = 0.0;
    for _ in 0..200 {
        let phi = L2Function::new((0..=16).map(|_| random_float_quaternion(rng)).collect());
        let norm = phi.norm();
        exact_worst = exact_worst.max((bargmann_bf(&phi, 16).norm() - norm).abs() / norm);
        quad_worst =
            quad_worst.max((bargmann_bf_quadrature(&phi, 16, &rule).norm() - norm).abs() / norm);
    }
    Ok(
        Outcome::new(200, quad_worst.max(exact_worst), 1e-10).with_detail(format!(
            "coefficient mode {exact_worst:e}, quadrature mode {quad_worst:e}"
        )),
    )
}

fn check_bs_basis(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let unit = sample_sphere_with(rng);
    let mut worst: f64 = 0.0;
    for n in 0..=16 {
        let f = slice_fock_basis(n);
        let target = L2Function::hermite(n);
        worst = worst.max(coeff_distance(
            &bargmann_bs_inverse(&f)?.coeffs,
            &target.coeffs,
        ));
        worst = worst.max(coeff_distance(
            &bargmann_bs_inverse_quadrature(&f, &unit, &plane)?.coeffs,
            &target.coeffs,
        ));
    }
    Ok(Outcome::new(17, worst, 1e-8))
}

fn check_bs_isometry(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let len = rng.gen_range(0..=16);
        let f = SliceSeries::random_float(rng, len, WeightSequence::fock());
        let unit = sample_sphere_with(rng);
        let n = f.norm();
        worst = worst.max((bargmann_bs_inverse(&f)?.norm() - n).abs() / n);
        worst =
            worst.max((bargmann_bs_inverse_quadrature(&f, &unit, &plane)?.norm() - n).abs() / n);
    }
    Ok(Outcome::new(100, worst, 1e-8))
}

fn check_upsilon_basis(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let unit = sample_sphere_with(rng);
    let mut worst: f64 = 0.0;
    for n in 0..=16 {
        let expect = AppellSeries::<f64>::unit(n, WeightSequence::fock())
            .scale(&(1.0 / factorial_f64(n).sqrt()));
        let f = slice_fock_basis(n);
        worst = worst.max(coeff_distance(upsilon(&f).coeffs(), expect.coeffs()));
        worst = worst.max(coeff_distance(
            upsilon_integral(&f, &unit, &plane)?.coeffs(),
            expect.coeffs(),
        ));
    }
    Ok(Outcome::new(17, worst, 1e-8))
}

fn check_upsilon_modes(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let hermite = ctx.hermite();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let len = rng.gen_range(0..=16);
        let f = SliceSeries::random_float(rng, len, WeightSequence::fock());
        let unit = sample_sphere_with(rng);
        let direct = upsilon(&f);
        let integral = upsilon_integral(&f, &unit, &plane)?;
        let composite = upsilon_composite(&f, &unit, TransformMode::Coefficient, &hermite, &plane)?;
        let composite_q =
            upsilon_composite(&f, &unit, TransformMode::Quadrature, &hermite, &plane)?;
        for other in [&integral, &composite, &composite_q] {
            worst = worst.max(coeff_distance(direct.coeffs(), other.coeffs()));
        }
        if i % 10 == 0 {
            let q = random_point(rng, 1.5);
            let at = upsilon_integral_at(&f, &unit, &q, 40, &plane)?;
            worst = worst.max(at.dist(&direct.eval(&q)));
        }
    }
    Ok(Outcome::new(100, worst, 1e-8))
}

fn check_upsilon_units(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let len = rng.gen_range(0..=16);
        let f = SliceSeries::random_float(rng, len, WeightSequence::fock());
        let units: Vec<ImaginaryUnit> = (0..5).map(|_| sample_sphere_with(rng)).collect();
        worst = worst.max(upsilon_unit_spread(&f, &units, &plane, 1e-8)?);
    }
    Ok(Outcome::new(50, worst, 1e-8))
}

fn check_kernel_l(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let plane = ctx.plane();
    let kmax = 30.min(plane.exactness_degree() / 2);
    let mut worst: f64 = 0.0;
    let count = 30;
    for _ in 0..count {
        let q = random_point(rng, 1.2);
        let p = random_point(rng, 1.2);
        let unit = sample_sphere_with(rng);
        let v = kernel_l_selfproduct(&q, &p, kmax, &plane, &unit)?;
        let (k, tail) = kernel_eval(&WeightSequence::fock(), &q, &p, kmax)?;
        worst = worst.max(v.dist(&k) - tail);
        let (x, y) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        worst = worst.max(
            exp_pair_moment(x, y, &plane, &unit).dist(&QuaternionFloat::from_real((x * y).exp())),
        );
        let n = rng.gen_range(0..8);
        worst = worst.max(
            exp_moment(x, n, &plane, &unit).dist(&QuaternionFloat::from_real(x.powi(n as i32))),
        );
    }
    Ok(Outcome::new(count, worst.max(0.0), 1e-8))
}

// ---- fmr ----

fn check_tau_square(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let count = 13;
    let mut fails = 0;
    for i in 0..count {
        let n = i % (ctx.n().min(12) + 1);
        let w = WeightSequence::named_weights()[i % 4].clone();
        let f = SliceSeries::random_exact(rng, n, w, 5);
        if tau_series(&f) != tau_series_symbolic(&f)? {
            fails += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_fmr_norm(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        for _ in 0..500 {
            let len = rng.gen_range(0..=ctx.n());
            let f = SliceSeries::random_exact(rng, len, w.clone(), 7);
            if !fmr_norm_identity(&f)?.exact() {
                fails += 1;
            }
            count += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_fmr_corollary(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let mut count = 0;
    for w in WeightSequence::named_weights() {
        for _ in 0..100 {
            let len = 2 + rng.gen_range(0..=ctx.n());
            let f = SliceSeries::random_exact(rng, len, w.clone(), 7);
            let mut coeffs = f.coeffs().to_vec();
            coeffs[0] = QuaternionExact::zero();
            coeffs[1] = QuaternionExact::zero();
            let f = SliceSeries::new(coeffs, w.clone());
            if tau_series(&f).norm_sqr() != f.norm_sqr() * int(4) {
                fails += 1;
            }
            count += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_surjectivity(_: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut fails = 0;
    let mut count = 0;
    for c in WeightSequence::named_weights() {
        let b = b_from_c(&c);
        for n in 0..=12 {
            let alpha = AppellSeries::random_exact(rng, n, b.clone(), 6);
            let g = tau_preimage(&alpha, &c);
            if g.truncation() > 14 || tau_series(&g) != alpha {
                fails += 1;
            }
            count += 1;
        }
    }
    Ok(Outcome::exact(count, fails))
}

fn check_transport_table(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let rows = transport_table();
    let mut fails = rows.iter().filter(|r| !r.exact).count();
    let expected_f1 = ["1", "1", "1", "1/2"];
    fails += rows
        .iter()
        .zip(expected_f1)
        .filter(|(r, e)| r.deficit_f1 != *e || r.deficit_f0 != "1")
        .count();
    let notes: Vec<String> = rows
        .iter()
        .filter_map(|r| r.note.as_ref().map(|n| format!("{}: {n}", r.space)))
        .collect();
    Ok(Outcome::exact(rows.len(), fails).with_detail(notes.join("; ")))
}

fn check_fmr_convergence(_: &Context, _: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut count = 0;
    for c in WeightSequence::named_weights() {
        for r in [0.0, 0.5, 0.9] {
            let rep = fmr_convergence_check(&c, r, 200)?;
            worst = worst.max(rep.limit - r * r);
            if !rep.tail.is_finite() {
                worst = f64::INFINITY;
            }
            count += 1;
        }
    }
    Ok(Outcome::new(count, worst.max(0.0), 1e-6))
}
