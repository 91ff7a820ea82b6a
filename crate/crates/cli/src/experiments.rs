//! One experiment per identity under test. Every experiment is
//! deterministic given its seed: sampling uses ChaCha8, a portable counter
//! RNG whose stream is fixed by the seed alone, and rows are reduced
//! sequentially.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cpnlab_core::geometry::{self, ChartPoint};
use cpnlab_core::kahlerfn;
use cpnlab_core::model::ModelConfig;
use cpnlab_core::quadrature;
use cpnlab_core::quantize::{self, OperatorFamily};
use cpnlab_core::repspace::{self, LinOperator};

use crate::report::{ExperimentReport, ReportConfig, ReportRow};

pub const EXPERIMENTS: &[&str] = &[
    "theorem1",
    "corollary",
    "resolution",
    "parseval",
    "star-exactness",
    "correspondence",
    "diastasis",
    "epsilon",
    "isometry",
    "divisor-order",
];

/// Levels swept by the correspondence experiment.
pub const SCAN_LEVELS: [usize; 5] = [2, 4, 8, 16, 32];

/// Largest level checked by the divisor-order experiment.
pub const DIVISOR_MAX_LEVEL: usize = 10;

#[derive(Debug)]
pub enum ExperimentError {
    Unknown(String),
    InvalidConfig(String),
    Core(cpnlab_core::Error),
}

impl std::fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExperimentError::Unknown(name) => {
                write!(f, "unknown experiment '{name}'; expected one of: ")?;
                write!(f, "{}", EXPERIMENTS.join(", "))
            }
            ExperimentError::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
            ExperimentError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ExperimentError {}

impl From<cpnlab_core::Error> for ExperimentError {
    fn from(e: cpnlab_core::Error) -> Self {
        ExperimentError::Core(e)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub level: usize,
    pub radial: Option<usize>,
    pub angular: Option<usize>,
    pub tol: f64,
    pub pairs: Option<usize>,
    pub seed: u64,
    pub deterministic: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 1,
            level: 2,
            radial: None,
            angular: None,
            tol: 1e-9,
            pairs: None,
            seed: 7,
            deterministic: true,
        }
    }
}

impl ExperimentConfig {
    fn radial(&self) -> usize {
        self.radial.unwrap_or(2 * self.level + 4)
    }

    fn angular(&self) -> usize {
        self.angular.unwrap_or(4 * self.level + 4)
    }

    fn pairs_or(&self, default: usize) -> usize {
        self.pairs.unwrap_or(default)
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.n < 1 {
            return Err(ExperimentError::InvalidConfig("n must be >= 1".into()));
        }
        if self.level < 1 {
            return Err(ExperimentError::InvalidConfig("level must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ExperimentError::InvalidConfig("tol must be > 0".into()));
        }
        Ok(())
    }

    fn model(&self) -> Result<ModelConfig, ExperimentError> {
        ModelConfig::new(self.n, self.level).map_err(ExperimentError::from)
    }

    fn report_config(&self, pairs_used: usize) -> ReportConfig {
        ReportConfig {
            n: self.n,
            level: self.level,
            radial: self.radial(),
            angular: self.angular(),
            tol: self.tol,
            pairs: pairs_used,
            seed: self.seed,
            deterministic: self.deterministic,
        }
    }
}

/// Run a named experiment; the report's `pass` mirrors the process exit
/// status (0 pass / 1 fail), and bad names or configs surface as errors
/// the binary maps to exit code 2.
pub fn run_experiment(
    name: &str,
    config: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let start = Instant::now();
    let (rows, pass, pairs_used) = match name {
        "theorem1" => theorem1(config)?,
        "corollary" => corollary(config)?,
        "resolution" => resolution(config)?,
        "parseval" => parseval(config)?,
        "star-exactness" => star_exactness(config)?,
        "correspondence" => correspondence(config)?,
        "diastasis" => diastasis(config)?,
        "epsilon" => epsilon(config)?,
        "isometry" => isometry(config)?,
        "divisor-order" => divisor_order(config)?,
        other => return Err(ExperimentError::Unknown(other.to_string())),
    };
    let wall_time_ms = if config.deterministic {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    Ok(ExperimentReport {
        experiment: name.to_string(),
        config: config.report_config(pairs_used),
        rows,
        pass,
        wall_time_ms,
    })
}

fn rng_for(config: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed)
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> ChartPoint {
    ChartPoint::new(
        (0..n)
            .map(|_| {
                Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))
            })
            .collect(),
    )
    .expect("sampled coordinates are finite")
}

/// A point of the cut locus of x: the chart solution of 1 + <x, y> = 0.
pub fn antipode(x: &ChartPoint) -> ChartPoint {
    let scale = -1.0 / x.norm_sqr();
    ChartPoint::new(x.coords().iter().map(|z| z * scale).collect())
        .expect("finite antipode")
}

fn nonzero_point(rng: &mut ChaCha8Rng, n: usize) -> ChartPoint {
    loop {
        let p = random_point(rng, n);
        if p.norm_sqr() > 1e-2 {
            return p;
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> LinOperator {
    let mut m = ndarray::Array2::from_elem((dim, dim), Complex64::new(0.0, 0.0));
    for i in 0..dim {
        m[[i, i]] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..dim {
            let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[[i, j]] = v;
            m[[j, i]] = v.conj();
        }
    }
    LinOperator::new(m).expect("square by construction")
}

type Outcome = (Vec<ReportRow>, bool, usize);

/// Polar divisor membership against the cut-locus predicate, on random
/// pairs plus constructed antipodal pairs, with the tolerance matching that
/// makes both predicates the same comparison.
fn theorem1(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let mut rng = rng_for(config);
    let pairs = config.pairs_or(500);
    let matched = repspace::cut_matched_tolerance(&cfg, config.tol);

    let mut disagreements = 0usize;
    let mut cut_hits = 0usize;
    for _ in 0..pairs {
        let w = random_point(&mut rng, config.n);
        let z = random_point(&mut rng, config.n);
        let polar = repspace::polar_divisor_member(&cfg, &w, &z, matched);
        let cut = geometry::in_cut_locus(&w, &z, config.tol);
        if polar != cut {
            disagreements += 1;
        }
        if cut {
            cut_hits += 1;
        }
    }

    let constructed = 100usize;
    let mut constructed_disagreements = 0usize;
    let mut constructed_hits = 0usize;
    for _ in 0..constructed {
        let w = nonzero_point(&mut rng, config.n);
        let z = antipode(&w);
        let polar = repspace::polar_divisor_member(&cfg, &w, &z, matched);
        let cut = geometry::in_cut_locus(&w, &z, config.tol);
        if polar != cut {
            constructed_disagreements += 1;
        }
        if polar && cut {
            constructed_hits += 1;
        }
    }

    let pass = disagreements == 0
        && constructed_disagreements == 0
        && constructed_hits == constructed;
    let rows = vec![
        ReportRow::new("random")
            .with("pairs", pairs as f64)
            .with("disagreements", disagreements as f64)
            .with("cut_hits", cut_hits as f64),
        ReportRow::new("constructed")
            .with("pairs", constructed as f64)
            .with("disagreements", constructed_disagreements as f64)
            .with("cut_hits", constructed_hits as f64),
    ];
    Ok((rows, pass, pairs))
}

/// Cayley distance of embedded points reaches pi/2 exactly on the cut
/// locus, plus the connecting identity d_c = arccos(cos^N d_g).
fn corollary(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let mut rng = rng_for(config);
    let pairs = config.pairs_or(1000);

    let mut inconsistent = 0usize;
    let mut max_identity_defect = 0.0f64;
    let mut check_pair = |x: &ChartPoint, y: &ChartPoint| {
        let check = kahlerfn::corollary_check(&cfg, x, y, config.tol);
        if !check.consistent {
            inconsistent += 1;
        }
        let identity = kahlerfn::cayley_from_distance(&cfg, x, y);
        max_identity_defect = max_identity_defect.max((check.dc - identity).abs());
        check.is_cut
    };

    for _ in 0..pairs {
        let x = random_point(&mut rng, config.n);
        let y = random_point(&mut rng, config.n);
        check_pair(&x, &y);
    }
    let constructed = 100usize;
    let mut constructed_hits = 0usize;
    for _ in 0..constructed {
        let x = nonzero_point(&mut rng, config.n);
        let y = antipode(&x);
        if check_pair(&x, &y) {
            constructed_hits += 1;
        }
    }

    let pass =
        inconsistent == 0 && constructed_hits == constructed && max_identity_defect < 1e-12;
    let rows = vec![
        ReportRow::new("consistency")
            .with("pairs", (pairs + constructed) as f64)
            .with("inconsistent", inconsistent as f64)
            .with("constructed_cut_hits", constructed_hits as f64),
        ReportRow::new("identity").with("max_defect", max_identity_defect),
    ];
    Ok((rows, pass, pairs))
}

/// Frobenius defect of the resolution of identity through the exact
/// monomial route.
fn resolution(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let defect = quantize::resolution_defect(&cfg);
    let pass = defect < 1e-12;
    let rows = vec![ReportRow::new("resolution")
        .with("defect", defect)
        .with("constant", quantize::resolution_constant(&cfg))];
    Ok((rows, pass, 0))
}

/// Full basis sweep of the holomorphic-sector inner product against the
/// Hilbert inner product; the grid route runs for n = 1, the exact
/// monomial route everywhere.
fn parseval(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let dim = cfg.dimension();
    let basis = |k: usize| {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[k] = Complex64::new(1.0, 0.0);
        cpnlab_core::CoherentVector::from_coeffs(coeffs)
    };

    let rule = if config.n == 1 {
        Some(quadrature::build_grid_rule(
            &cfg,
            config.radial(),
            config.angular(),
        )?)
    } else {
        None
    };

    let mut max_grid = 0.0f64;
    let mut max_exact = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let u = basis(i);
            let v = basis(j);
            let expect = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            if let Some(rule) = &rule {
                let grid = quantize::fh_inner(&cfg, &u, &v, rule)?;
                max_grid = max_grid.max((grid - expect).norm());
            }
            let exact = quantize::fh_inner_exact(&cfg, &u, &v)?;
            max_exact = max_exact.max((exact - expect).norm());
        }
    }

    let pass = max_grid < 1e-10 && max_exact < 1e-10;
    let mut row = ReportRow::new("parseval").with("max_defect_exact", max_exact);
    if rule.is_some() {
        row = row.with("max_defect_grid", max_grid);
    }
    Ok((vec![row], pass, 0))
}

/// Star product by quadrature against the operator-product oracle on
/// random Hermitian pairs.
fn star_exactness(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    if config.n != 1 {
        return Err(ExperimentError::InvalidConfig(
            "star-exactness runs on n = 1".into(),
        ));
    }
    let cfg = config.model()?;
    let rule = quadrature::build_grid_rule(&cfg, config.radial(), config.angular())?;
    let mut rng = rng_for(config);
    let trials = config.pairs_or(20);

    let mut rows = Vec::with_capacity(trials + 1);
    let mut max_defect = 0.0f64;
    for k in 0..trials {
        let a1 = random_hermitian(&mut rng, cfg.dimension());
        let a2 = random_hermitian(&mut rng, cfg.dimension());
        let z = random_point(&mut rng, 1);
        let report = quantize::star_product(&cfg, &a1, &a2, &z, &rule)?;
        max_defect = max_defect.max(report.defect);
        rows.push(ReportRow::new(format!("trial-{k:02}")).with("defect", report.defect));
    }
    rows.push(ReportRow::new("summary").with("max_defect", max_defect));
    Ok((rows, max_defect < 1e-8, trials))
}

/// Deformation and commutator defects over the level schedule, with the
/// fitted log-log slope of the deformation defect.
fn correspondence(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    if config.n != 1 {
        return Err(ExperimentError::InvalidConfig(
            "correspondence runs on n = 1".into(),
        ));
    }
    let z = ChartPoint::one(Complex64::new(0.5, 0.0));
    let scan = quantize::correspondence_scan(&SCAN_LEVELS, OperatorFamily::SpinXY, &z)?;
    let slope = scan
        .fitted_slope
        .expect("spin families have nonzero deformation defects");

    let mut rows = Vec::with_capacity(scan.rows.len());
    for row in &scan.rows {
        rows.push(
            ReportRow::new(format!("N={}", row.level))
                .with("N", row.level as f64)
                .with("d1", row.d1)
                .with("d2", row.d2)
                .with("fitted_slope", slope),
        );
    }

    let slope_ok = (slope + 1.0).abs() <= 0.15;
    let tail: Vec<&quantize::ScanRow> =
        scan.rows.iter().filter(|r| r.level >= 8).collect();
    let decreasing = tail.windows(2).all(|w| w[0].d2 > w[1].d2);
    Ok((rows, slope_ok && decreasing, 0))
}

/// Regular-quantization function identities: the two-point and
/// characteristic functions agree, the diastasis matches its potential
/// route, and the two-point function is the cosine power of the distance.
fn diastasis(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let mut rng = rng_for(config);
    let pairs = config.pairs_or(200);

    let mut max_psi_defect = 0.0f64;
    let mut max_diastasis_defect = 0.0f64;
    let mut max_cosine_defect = 0.0f64;
    let mut used = 0usize;
    while used < pairs {
        let x = random_point(&mut rng, config.n);
        let y = random_point(&mut rng, config.n);
        let report = match kahlerfn::diastasis_report(&cfg, &x, &y) {
            Ok(r) => r,
            Err(_) => continue, // pairs on the cut locus are out of domain
        };
        used += 1;
        max_psi_defect = max_psi_defect.max((report.psi - report.psi_tilde).abs());
        let potential_route = kahlerfn::diastasis_potential_route(&cfg, &x, &y)?;
        max_diastasis_defect =
            max_diastasis_defect.max((report.diastasis - potential_route).abs());
        let cosine = geometry::geodesic_distance(&x, &y)
            .cos()
            .powi(2 * cfg.level() as i32);
        max_cosine_defect = max_cosine_defect.max((report.psi - cosine).abs());
    }

    let pass = max_psi_defect < 1e-12 && max_diastasis_defect < 1e-12 && max_cosine_defect < 1e-12;
    let rows = vec![ReportRow::new("defects")
        .with("max_psi_vs_characteristic", max_psi_defect)
        .with("max_diastasis_dual_route", max_diastasis_defect)
        .with("max_psi_vs_cosine_power", max_cosine_defect)];
    Ok((rows, pass, pairs))
}

/// Constancy of the epsilon function across sampled chart points.
fn epsilon(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let mut rng = rng_for(config);
    let points = config.pairs_or(100);
    let values: Vec<f64> = (0..points)
        .map(|_| quantize::epsilon_function(&cfg, &random_point(&mut rng, config.n)))
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let variance = values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / values.len() as f64;
    let spread = variance.sqrt() / mean;

    let pass = spread < 1e-12;
    let rows = vec![ReportRow::new("epsilon")
        .with("mean", mean)
        .with("relative_stddev", spread)];
    Ok((rows, pass, points))
}

/// Pullback of the ambient projective metric along the coherent-state
/// embedding against the closed-form level-N metric.
fn isometry(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let cfg = config.model()?;
    let mut rng = rng_for(config);
    let points = config.pairs_or(50);
    let mut max_defect = 0.0f64;
    for _ in 0..points {
        let z = random_point(&mut rng, config.n);
        max_defect = max_defect.max(kahlerfn::isometry_defect(&cfg, &z));
    }
    let pass = max_defect < 1e-6;
    let rows = vec![ReportRow::new("isometry")
        .with("points", points as f64)
        .with("max_defect", max_defect)];
    Ok((rows, pass, points))
}

/// Vanishing multiplicity of the overlap along the polar divisor equals
/// the level, for every level up to the schedule maximum.
fn divisor_order(config: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    if config.n != 1 {
        return Err(ExperimentError::InvalidConfig(
            "divisor-order runs on n = 1".into(),
        ));
    }
    let mut rng = rng_for(config);
    let per_level = config.pairs_or(20);

    let mut rows = Vec::with_capacity(DIVISOR_MAX_LEVEL);
    let mut failures = 0usize;
    for level in 1..=DIVISOR_MAX_LEVEL {
        let cfg = ModelConfig::new(1, level)?;
        let mut level_failures = 0usize;
        for _ in 0..per_level {
            let w = nonzero_point(&mut rng, 1);
            let phi = rng.random_range(0.0..std::f64::consts::TAU);
            let dir = Complex64::from_polar(1.0, phi);
            let order = kahlerfn::polar_vanishing_order(&cfg, &w, dir)?;
            if order != level {
                level_failures += 1;
            }
        }
        failures += level_failures;
        rows.push(
            ReportRow::new(format!("level-{level:02}"))
                .with("level", level as f64)
                .with("samples", per_level as f64)
                .with("failures", level_failures as f64),
        );
    }
    Ok((rows, failures == 0, per_level))
}
