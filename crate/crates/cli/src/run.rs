//! Command pipelines from a parsed scene to a result document.

use std::collections::BTreeMap;
use std::time::Instant;

use hollowkit::bodies::Body;
use hollowkit::critical::{
    check_critical, hollow_simplex, uniqueness_probe, CriticalError, CriticalFamily, Criticality, HollowSimplex,
};
use hollowkit::geom::Point;
use hollowkit::hollow::{
    boundary_attribution, certify_hollow, hausdorff_threshold, hull_vs_simplex, verify_stabbing, HollowCertificate,
    HollowError, StabbingFailure, StabbingPair,
};
use hollowkit::opt::{intersect_witness, EmptyCertificate, FeasibilityReport, OptError, DEFAULT_TOL};
use hollowkit::sperner::{kkm_verify, klee_solve, third_proof_instance, KkmInstance, KleeMethod, KleeOptions, SpernerError};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::render::{render_svg, Figure};
use crate::scene::{Scene, SceneError, SCHEMA};

pub const DEFAULT_RESOLUTION: f64 = 0.01;
pub const DEFAULT_DEPTH: usize = 1;
pub const DEFAULT_RESTARTS: usize = 10;
pub const KKM_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    Hollow,
    Certify,
    SolveKlee,
    Kkm,
    StabVerify,
    Render,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Hollow => "hollow",
            Command::Certify => "certify",
            Command::SolveKlee => "solve-klee",
            Command::Kkm => "kkm",
            Command::StabVerify => "stab-verify",
            Command::Render => "render",
        }
    }
}

/// Flag values; `None` falls back to the scene options, then defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub resolution: Option<f64>,
    pub depth: Option<usize>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub timings: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub tol: f64,
    pub resolution: f64,
    pub depth: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Hollow(#[from] HollowError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Sperner(#[from] SpernerError),
    #[error("invalid flag: {0}")]
    Flag(String),
    #[error("render needs a planar scene, got dimension {0}")]
    RenderDimension(usize),
    #[error("stab-verify needs a \"stabbing\" section with subspaces w and v")]
    MissingStabbing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateOut {
    pub body: usize,
    pub normal: Vec<f64>,
    pub offset: f64,
    pub gap: f64,
    pub margin: f64,
}

impl From<&EmptyCertificate> for CertificateOut {
    fn from(c: &EmptyCertificate) -> Self {
        CertificateOut {
            body: c.body,
            normal: v(c.hyperplane.normal()),
            offset: c.hyperplane.offset(),
            gap: c.gap,
            margin: c.margin,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriticalityOut {
    Critical {
        n: usize,
        witnesses: Vec<Vec<f64>>,
        gaps: Vec<f64>,
        certificate: CertificateOut,
    },
    TooManyBodies {
        n: usize,
        d: usize,
        message: String,
    },
    EmptySubfamily {
        index: usize,
        certificate: CertificateOut,
    },
    CommonPoint {
        point: Vec<f64>,
    },
    Borderline {
        index: usize,
        gap: f64,
        threshold: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct HollowSimplexOut {
    pub vertices: Vec<Vec<f64>>,
    pub partners: Vec<Vec<f64>>,
    pub gaps: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessOut {
    pub restarts: usize,
    pub deviations: Vec<f64>,
    pub threshold: f64,
    pub flagged: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HollowCertificateOut {
    pub resolution: f64,
    pub component_count: usize,
    pub component_sizes: Vec<usize>,
    pub measure: f64,
    pub hull_vertices: Vec<Vec<f64>>,
    /// Boundary cells of the component touching each body.
    pub boundary_cells_per_body: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HausdorffOut {
    pub distance: f64,
    pub threshold: f64,
    pub within: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KleeOut {
    pub point: Vec<f64>,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    pub rounds: usize,
    pub cells: usize,
    pub witnesses: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KkmOut {
    pub holds: bool,
    pub samples_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_point: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection_witness: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabbingOut {
    pub p: Vec<f64>,
    pub a_ok: bool,
    pub b_ok: bool,
    pub failures: Vec<String>,
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub schema: &'static str,
    pub command: &'static str,
    pub verdict: Verdict,
    pub summary: String,
    pub dimension: usize,
    pub body_count: usize,
    pub settings: Settings,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criticality: Option<CriticalityOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hollow_simplex: Option<HollowSimplexOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniqueness: Option<UniquenessOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hollow_certificate: Option<HollowCertificateOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff: Option<HausdorffOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub klee: Option<KleeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kkm: Option<KkmOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabbing: Option<StabbingOut>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Seconds per stage, present only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

pub struct RunOutput {
    pub result: RunResult,
    pub svg: Option<String>,
}

fn v(p: &Point) -> Vec<f64> {
    p.iter().copied().collect()
}

fn vs(ps: &[Point]) -> Vec<Vec<f64>> {
    ps.iter().map(v).collect()
}

struct Stages {
    enabled: bool,
    times: BTreeMap<String, f64>,
}

impl Stages {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.times.insert(name.to_string(), start.elapsed().as_secs_f64());
        }
        out
    }
}

struct Pipeline {
    bodies: Vec<Body>,
    settings: Settings,
    result: RunResult,
    stages: Stages,
}

fn resolve(scene: &Scene, o: &Overrides) -> Result<Settings, RunError> {
    let s = Settings {
        tol: o.tol.or(scene.options.tol).unwrap_or(DEFAULT_TOL),
        resolution: o.resolution.or(scene.options.resolution).unwrap_or(DEFAULT_RESOLUTION),
        depth: o.depth.or(scene.options.depth).unwrap_or(DEFAULT_DEPTH),
        restarts: o.restarts.or(scene.options.restarts).unwrap_or(DEFAULT_RESTARTS),
        seed: o.seed.unwrap_or(0),
    };
    for (name, x) in [("--tol", s.tol), ("--resolution", s.resolution)] {
        if !(x > 0.0 && x.is_finite()) {
            return Err(RunError::Flag(format!("{name} must be positive, got {x}")));
        }
    }
    if s.depth == 0 || s.restarts == 0 {
        return Err(RunError::Flag("--depth and --restarts must be positive".into()));
    }
    Ok(s)
}

/// Runs `command` on `scene`. Failures of the tested property come back as
/// a result with a `failed` verdict; everything else is an error.
pub fn run(command: Command, scene: &Scene, overrides: &Overrides) -> Result<RunOutput, RunError> {
    scene.validate()?;
    let settings = resolve(scene, overrides)?;
    let mut stages = Stages {
        enabled: overrides.timings,
        times: BTreeMap::new(),
    };
    let bodies = stages.time("build", || scene.build_bodies())?;
    let result = RunResult {
        schema: SCHEMA,
        command: command.name(),
        verdict: Verdict::Ok,
        summary: String::new(),
        dimension: scene.dimension,
        body_count: bodies.len(),
        settings: settings.clone(),
        criticality: None,
        hollow_simplex: None,
        uniqueness: None,
        hollow_certificate: None,
        hausdorff: None,
        klee: None,
        kkm: None,
        stabbing: None,
        warnings: Vec::new(),
        timings: None,
    };
    let mut p = Pipeline {
        bodies,
        settings,
        result,
        stages,
    };
    let svg = match command {
        Command::Check => {
            p.check()?;
            None
        }
        Command::Hollow => {
            if let Some(f) = p.check()? {
                p.hollow(&f)?;
            }
            None
        }
        Command::Certify => {
            if let Some(f) = p.check()? {
                if let Some(hs) = p.hollow(&f)? {
                    p.certify(&f, &hs)?;
                }
            }
            None
        }
        Command::SolveKlee => {
            p.klee(scene)?;
            None
        }
        Command::Kkm => {
            p.kkm(scene)?;
            None
        }
        Command::StabVerify => {
            p.stab(scene)?;
            None
        }
        Command::Render => Some(p.render(scene)?),
    };
    if overrides.timings {
        p.result.timings = Some(std::mem::take(&mut p.stages.times));
    }
    Ok(RunOutput { result: p.result, svg })
}

impl Pipeline {
    fn fail(&mut self, summary: String) {
        self.result.verdict = Verdict::Failed;
        self.result.summary = summary;
    }

    /// Criticality report; returns the family when certified.
    fn check(&mut self) -> Result<Option<CriticalFamily>, RunError> {
        let tol = self.settings.tol;
        let bodies = &self.bodies;
        let verdict = self.stages.time("check", || check_critical(bodies, tol))?;
        let (out, family) = match verdict {
            Criticality::Critical(f) => {
                self.result.summary = format!("{}-critical", f.n());
                (
                    CriticalityOut::Critical {
                        n: f.n(),
                        witnesses: vs(f.witnesses()),
                        gaps: f.gaps(),
                        certificate: f.certificate().into(),
                    },
                    Some(f),
                )
            }
            Criticality::TooManyBodies(r) => {
                self.fail(format!("not critical: {r}"));
                (
                    CriticalityOut::TooManyBodies {
                        n: r.n,
                        d: r.d,
                        message: r.to_string(),
                    },
                    None,
                )
            }
            Criticality::EmptySubfamily { index, certificate } => {
                self.fail(format!("not critical: the bodies other than C_{index} have no common point"));
                (
                    CriticalityOut::EmptySubfamily {
                        index,
                        certificate: (&certificate).into(),
                    },
                    None,
                )
            }
            Criticality::CommonPoint(point) => {
                self.fail("not critical: all bodies share a point".into());
                (CriticalityOut::CommonPoint { point: v(&point) }, None)
            }
            Criticality::Borderline { index, gap, threshold } => {
                self.fail(format!(
                    "borderline: C_{index} is within {gap:e} of the other bodies' intersection (threshold {threshold:e})"
                ));
                (CriticalityOut::Borderline { index, gap, threshold }, None)
            }
        };
        self.result.criticality = Some(out);
        Ok(family)
    }

    fn hollow(&mut self, f: &CriticalFamily) -> Result<Option<HollowSimplex>, RunError> {
        if f.n() < f.dim() {
            self.fail(format!("no hollow: {}-critical family in R^{}", f.n(), f.dim()));
            return Ok(None);
        }
        let hs = self.stages.time("hollow_simplex", || hollow_simplex(f))?;
        self.result.hollow_simplex = Some(HollowSimplexOut {
            vertices: vs(hs.vertices()),
            partners: vs(hs.partners()),
            gaps: hs.gaps().to_vec(),
        });
        self.result.summary = format!("{}-critical; hollow simplex computed", f.n());
        Ok(Some(hs))
    }

    fn certify(&mut self, f: &CriticalFamily, hs: &HollowSimplex) -> Result<Option<HollowCertificate>, RunError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.settings.seed);
        let restarts = self.settings.restarts;
        let probe = self.stages.time("uniqueness", || uniqueness_probe(f, restarts, &mut rng))?;
        let flagged = probe.flagged();
        self.result.uniqueness = Some(UniquenessOut {
            restarts: probe.restarts,
            deviations: probe.deviations.clone(),
            threshold: probe.threshold,
            flagged: flagged.clone(),
        });

        let h = self.settings.resolution;
        let cert = match self.stages.time("grid", || certify_hollow(f, h)) {
            Ok(c) => c,
            Err(HollowError::NoBoundedComponent { h }) => {
                self.warn_thin_bodies(f, h);
                self.fail(format!("no bounded component found at resolution {h}"));
                return Ok(None);
            }
            Err(e) => return Err(e.into()),
        };
        self.warn_thin_bodies(f, cert.h());
        let attribution = boundary_attribution(&cert);
        self.result.hollow_certificate = Some(HollowCertificateOut {
            resolution: cert.h(),
            component_count: cert.component_count(),
            component_sizes: cert.component_sizes().to_vec(),
            measure: cert.measure(),
            hull_vertices: vs(cert.hull_vertices()),
            boundary_cells_per_body: attribution.per_body.clone(),
        });
        let distance = self.stages.time("hausdorff", || hull_vs_simplex(&cert, hs))?;
        let threshold = hausdorff_threshold(f.dim(), cert.h());
        let within = distance <= threshold;
        self.result.hausdorff = Some(HausdorffOut {
            distance,
            threshold,
            within,
        });
        if cert.component_count() > 1 {
            self.result
                .warnings
                .push(format!("{} bounded components; the largest was certified", cert.component_count()));
        }
        if !within {
            self.fail(format!("hausdorff distance {distance:e} exceeds {threshold:e}"));
        } else if !flagged.is_empty() {
            self.fail(format!("hollow-simplex vertices {flagged:?} moved across restarts"));
        } else {
            self.result.summary = format!(
                "{}-critical; hollow certified ({} component(s), hausdorff {:.3e} <= {:.3e})",
                f.n(),
                cert.component_count(),
                distance,
                threshold
            );
        }
        Ok(Some(cert))
    }

    fn warn_thin_bodies(&mut self, f: &CriticalFamily, h: f64) {
        let w = f.witnesses();
        let mut lo = w[0].clone();
        let mut hi = w[0].clone();
        for p in w {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        let pad = (&hi - &lo) * 0.05;
        let Ok(grid) = hollowkit::hollow::Grid::over_box(f.bodies(), &(&lo - &pad), &(&hi + &pad), h) else {
            return;
        };
        for (i, count) in grid.cover_counts(f.bodies().len()).into_iter().enumerate() {
            if count == 0 {
                self.result.warnings.push(format!(
                    "body {i} covers no grid cell at resolution {h}; thicken it to make it visible"
                ));
            }
        }
    }

    /// Scene witnesses, or one feasibility solve per leave-one-out family.
    fn witnesses(&mut self, scene: &Scene) -> Result<Option<Vec<Point>>, RunError> {
        if let Some(w) = &scene.witnesses {
            return Ok(Some(w.iter().map(|p| Point::from_column_slice(p)).collect()));
        }
        let tol = self.settings.tol;
        let mut out = Vec::with_capacity(self.bodies.len());
        for j in 0..self.bodies.len() {
            if self.bodies.len() == 1 {
                out.push(Point::zeros(scene.dimension));
                continue;
            }
            let rest: Vec<Body> = self
                .bodies
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, b)| b.clone())
                .collect();
            match self.stages.time("witnesses", || intersect_witness(&rest, tol))? {
                FeasibilityReport::Witness(w) => out.push(w),
                FeasibilityReport::Empty(_) => {
                    self.fail(format!("the bodies other than C_{j} have no common point"));
                    return Ok(None);
                }
            }
        }
        Ok(Some(out))
    }

    fn klee(&mut self, scene: &Scene) -> Result<(), RunError> {
        let Some(witnesses) = self.witnesses(scene)? else {
            return Ok(());
        };
        let options = KleeOptions {
            initial_depth: self.settings.depth,
            ..KleeOptions::default()
        };
        let tol = self.settings.tol;
        let bodies = &self.bodies;
        match self.stages.time("klee", || klee_solve(bodies, &witnesses, tol, &options)) {
            Ok(sol) => {
                let (method, diameter) = match sol.method {
                    KleeMethod::Single => ("single", None),
                    KleeMethod::Helly => ("helly", None),
                    KleeMethod::Sentinel => ("sentinel", None),
                    KleeMethod::Rainbow { diameter } => ("rainbow", Some(diameter)),
                };
                self.result.summary = format!("common point found ({method})");
                self.result.klee = Some(KleeOut {
                    point: v(&sol.point),
                    method: method.into(),
                    diameter,
                    rounds: sol.rounds,
                    cells: sol.cells,
                    witnesses: vs(&witnesses),
                });
            }
            Err(e @ (SpernerError::Uncovered { .. } | SpernerError::NoRainbow | SpernerError::HellyBranchEmpty(_))) => {
                self.fail(format!("no common point: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    fn kkm(&mut self, scene: &Scene) -> Result<(), RunError> {
        let inst = match &scene.kkm {
            Some(k) => KkmInstance::new(
                k.points.iter().map(|p| Point::from_column_slice(p)).collect(),
                k.images.iter().map(|i| self.bodies[*i].clone()).collect(),
            )?,
            None => {
                let Some(witnesses) = self.witnesses(scene)? else {
                    return Ok(());
                };
                third_proof_instance(&self.bodies, &witnesses)?
            }
        };
        let tol = self.settings.tol;
        let report = self.stages.time("kkm", || kkm_verify(&inst, KKM_SAMPLES, tol))?;
        let counter = report.counterexample.as_ref();
        self.result.kkm = Some(KkmOut {
            holds: report.kkm_holds,
            samples_checked: report.samples_checked,
            counterexample_subset: counter.map(|c| c.subset.clone()),
            counterexample_point: counter.map(|c| v(&c.point)),
            intersection_witness: report.intersection_witness.as_ref().map(v),
        });
        if report.kkm_holds {
            self.result.summary = "KKM condition holds; images share a point".into();
        } else {
            self.fail("KKM condition fails".into());
        }
        Ok(())
    }

    fn stab(&mut self, scene: &Scene) -> Result<(), RunError> {
        let flats = scene.stabbing.as_ref().ok_or(RunError::MissingStabbing)?;
        let pair = StabbingPair::new(flats.w.build()?, flats.v.build()?)?;
        let Some(f) = self.check()? else {
            return Ok(());
        };
        let tol = self.settings.tol;
        let report = self
            .stages
            .time("stabbing", || verify_stabbing(&pair, f.bodies(), f.witnesses(), tol))?;
        let describe = |x: &StabbingFailure| match x {
            StabbingFailure::WitnessOffW { index, distance } => format!("witness a_{index} is {distance:e} off W"),
            StabbingFailure::VMeetsBody { index, distance } => format!("V comes within {distance:e} of C_{index}"),
            StabbingFailure::PointCovered { index } => format!("p lies in C_{index}"),
            StabbingFailure::Unbounded => "the component of p in W is unbounded".into(),
        };
        let mut failures: Vec<String> = report.a_failures.iter().map(describe).collect();
        failures.extend(report.b_failure.iter().map(describe));
        self.result.stabbing = Some(StabbingOut {
            p: v(pair.p()),
            a_ok: report.a_ok,
            b_ok: report.b_ok,
            failures,
        });
        match (report.a_ok, report.b_ok) {
            (true, true) => self.result.summary = "stabbing pair verified".into(),
            (false, _) => self.fail("stabbing pair fails (a)".into()),
            (true, false) => self.fail("stabbing pair fails (b)".into()),
        }
        Ok(())
    }

    fn render(&mut self, scene: &Scene) -> Result<String, RunError> {
        if scene.dimension != 2 {
            return Err(RunError::RenderDimension(scene.dimension));
        }
        let family = self.check()?;
        let summary = self.result.summary.clone();
        let (mut simplex, mut cert) = (None, None);
        if let Some(f) = &family {
            simplex = self.hollow(f)?;
            if let Some(hs) = &simplex {
                cert = self.certify(f, hs)?;
            }
        }
        self.result.verdict = Verdict::Ok;
        self.result.summary = format!("{summary}; figure rendered");
        let fig = Figure {
            bodies: &self.bodies,
            witnesses: family.as_ref().map(|f| f.witnesses()),
            hollow: cert.as_ref(),
            simplex: simplex.as_ref(),
        };
        Ok(self.stages.time("render", || render_svg(&fig)))
    }
}
