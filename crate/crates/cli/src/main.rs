//! `taille`: batch front end over the taille crate.
//!
//! Exit codes: 0 on success, 1 on a domain error (JSON report on stderr),
//! 2 on a usage error.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use taille::cochain::cohomology_rank;
use taille::exact::{format_rational, parse_rational, to_f64};
use taille::geometry::{
    de_broglie_wavelength, equator_scenario, export_sphere_twist, free_particle_period,
    free_particle_phase_exact, Triangulation,
};
use taille::io::{
    from_json, table_to_json, AlgebraJson, CochainJson, ComplexJson, PosetJson, SemigroupJson,
    TwistJson,
};
use taille::lattice::{
    exact_walk_pmf, gaussian_compare, monte_carlo_walk, n_cell_mean_pmf, LatticeDistribution,
    WalkParams,
};
use taille::nerve::{barycentric_subdivision, compare_poset_cohomology};
use taille::twist::{star, triviality_check, verify_twist, Multiplier, RawTwist, Triviality};
use taille::{DegreeZero, Rational, SemigroupTable, TwistMode};

use report::{csv_table, fmt_g, json, Failure};

#[derive(Parser)]
#[command(
    name = "taille",
    version,
    about = "Coherent twists, tailleur cocycles and lattice walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Semigroup tables.
    #[command(subcommand)]
    Semigroup(SemigroupCmd),
    /// Cochain cohomology of a semigroup.
    #[command(subcommand)]
    Cohomology(CohomologyCmd),
    /// Poset cohomology against the Betti numbers of the nerve.
    #[command(subcommand)]
    Nerve(NerveCmd),
    /// Twists given by additive exponents.
    #[command(subcommand)]
    Twist(TwistCmd),
    /// Twisted products in the semigroup algebra.
    #[command(subcommand)]
    Star(StarCmd),
    /// Free-particle phase on the plane.
    Debroglie(DebroglieArgs),
    /// Tailleur cocycle on the unit sphere.
    #[command(subcommand)]
    Sphere(SphereCmd),
    /// Lattice random walk.
    #[command(subcommand)]
    Walk(WalkCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Write the primary output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl Output {
    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn json_only(&self) -> Result<(), Failure> {
        match self.format {
            Some(Format::Csv) => Err(Failure::usage("this command only emits JSON")),
            _ => Ok(()),
        }
    }
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum SemigroupCmd {
    /// Load a semigroup description and check associativity and the zero.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum CohomologyCmd {
    /// Ranks of cocycles, coboundaries and cohomology in degrees 0..=max.
    Ranks {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_degree: usize,
        /// Use C^0 = 0 instead of functions on objects.
        #[arg(long)]
        cc0_zero: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum NerveCmd {
    /// Input is a poset, or a simplicial complex replaced by its face poset.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        cc0_zero: bool,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct TwistInput {
    /// Twist document (exponent values plus mode).
    #[arg(long)]
    input: PathBuf,
    /// Semigroup document; overrides one embedded in the twist.
    #[arg(long)]
    semigroup: Option<PathBuf>,
    /// Switch to the real mode `exp(ħF)` with this ħ.
    #[arg(long, value_parser = rational_arg, conflicts_with = "tau")]
    hbar: Option<Rational>,
    /// Switch to the circle mode with this τ.
    #[arg(long, value_parser = rational_arg)]
    tau: Option<Rational>,
}

#[derive(Subcommand)]
enum TwistCmd {
    /// Check f(a,b) f(ab,c) = f(b,c) f(a,bc) on every composable triple.
    Verify {
        #[command(flatten)]
        twist: TwistInput,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether the twist is a coboundary; print a witness if so.
    Trivial {
        #[command(flatten)]
        twist: TwistInput,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum StarCmd {
    /// Twisted product of two algebra elements.
    Eval {
        #[command(flatten)]
        twist: TwistInput,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct DebroglieArgs {
    #[arg(long, value_parser = rational_arg)]
    p: Rational,
    #[arg(long, value_parser = rational_arg)]
    v: Rational,
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    h: Rational,
    #[arg(long, value_parser = rational_arg)]
    t_max: Rational,
    /// Number of intervals; times are k t_max / steps for k = 0..=steps.
    #[arg(long)]
    steps: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum TriangulationArg {
    Tetrahedral,
    Octahedral,
}

#[derive(Subcommand)]
enum SphereCmd {
    /// Equator scenario on the unit sphere.
    Phase {
        /// Start point, in degrees south of the equator on meridian 0 (90 is the south pole).
        #[arg(long)]
        colat: f64,
        /// Largest longitude, in degrees.
        #[arg(long)]
        lambda_max: f64,
        #[arg(long)]
        steps: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Circle twist of a sphere triangulation, with its semigroup embedded.
    TwistExport {
        #[arg(long, value_enum)]
        triangulation: TriangulationArg,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    steps: u32,
    #[arg(long, value_parser = rational_arg)]
    prob: Rational,
    /// Number of independent cells averaged.
    #[arg(long, default_value_t = 1)]
    cells: u32,
}

#[derive(Subcommand)]
enum WalkCmd {
    /// Exact distribution of the packet mean.
    Pmf {
        #[command(flatten)]
        walk: WalkArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo estimate of the same distribution.
    Mc {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long, env = "TAILLE_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Binomial against Gaussian CDF.
    Compare {
        #[arg(long)]
        steps: u32,
        #[arg(long, value_parser = rational_arg)]
        prob: Rational,
        #[command(flatten)]
        out: Output,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::file(path, e))
}

fn emit(out: &Output, text: String) -> Result<(), Failure> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::file(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_semigroup(path: &Path) -> Result<SemigroupTable, Failure> {
    Ok(from_json::<SemigroupJson>(&read(path)?)?.to_table()?)
}

fn load_twist_doc(t: &TwistInput) -> Result<(TwistJson, Option<Arc<SemigroupTable>>), Failure> {
    let mut doc: TwistJson = from_json(&read(&t.input)?)?;
    if let Some(h) = &t.hbar {
        doc.mode = taille::io::ModeName::Real;
        doc.hbar = Some(format_rational(h));
        doc.tau = None;
        doc.coeffs = None;
    }
    if let Some(tau) = &t.tau {
        doc.mode = taille::io::ModeName::Circle;
        doc.tau = Some(format_rational(tau));
        doc.hbar = None;
        doc.coeffs = None;
    }
    let s = t
        .semigroup
        .as_deref()
        .map(load_semigroup)
        .transpose()?
        .map(Arc::new);
    Ok((doc, s))
}

fn convention(cc0_zero: bool) -> DegreeZero {
    if cc0_zero {
        DegreeZero::Zero
    } else {
        DegreeZero::Objects
    }
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    elements: usize,
    zero: String,
    has_objects: bool,
    composable_pairs: usize,
    composable_triples: usize,
}

fn semigroup_validate(input: &Path, out: &Output) -> Result<(), Failure> {
    out.json_only()?;
    let s = load_semigroup(input)?;
    let r = ValidateReport {
        valid: true,
        elements: s.len(),
        zero: s.name(s.zero()).to_string(),
        has_objects: s.has_objects(),
        composable_pairs: s.composable_tuples(2).len(),
        composable_triples: s.composable_tuples(3).len(),
    };
    emit(out, json(&r))
}

#[derive(Serialize)]
struct RankRow {
    degree: usize,
    cocycles: usize,
    coboundaries: usize,
    rank: usize,
}

fn cohomology_ranks(
    input: &Path,
    max_degree: usize,
    cc0_zero: bool,
    out: &Output,
) -> Result<(), Failure> {
    let s = load_semigroup(input)?;
    let mut rows = Vec::with_capacity(max_degree + 1);
    for degree in 0..=max_degree {
        let r = cohomology_rank(&s, degree, convention(cc0_zero))?;
        rows.push(RankRow {
            degree,
            cocycles: r.cocycles,
            coboundaries: r.coboundaries,
            rank: r.cohomology,
        });
    }
    let text = match out.format(Format::Csv) {
        Format::Json => json(&rows),
        Format::Csv => csv_table(
            &["degree", "cocycles", "coboundaries", "rank"],
            rows.iter().map(|r| {
                vec![
                    r.degree.to_string(),
                    r.cocycles.to_string(),
                    r.coboundaries.to_string(),
                    r.rank.to_string(),
                ]
            }),
        )?,
    };
    emit(out, text)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum NerveInput {
    Complex(ComplexJson),
    Poset(PosetJson),
}

#[derive(Serialize)]
struct CompareRowJson {
    degree: usize,
    semigroup_rank: usize,
    simplicial_rank: usize,
    r#match: bool,
}

fn nerve_compare(
    input: &Path,
    max_degree: usize,
    cc0_zero: bool,
    out: &Output,
) -> Result<(), Failure> {
    let poset = match from_json::<NerveInput>(&read(input)?)? {
        NerveInput::Complex(c) => barycentric_subdivision(&c.to_complex()?),
        NerveInput::Poset(p) => p.to_poset()?,
    };
    let r = compare_poset_cohomology(&poset, max_degree, convention(cc0_zero))?;
    let text = match out.format(Format::Csv) {
        Format::Csv => r.to_csv(),
        Format::Json => json(
            &r.rows
                .iter()
                .map(|x| CompareRowJson {
                    degree: x.degree,
                    semigroup_rank: x.semigroup_rank,
                    simplicial_rank: x.simplicial_rank,
                    r#match: x.matches(),
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(out, text)
}

#[derive(Serialize)]
struct VerifyReport {
    mode: &'static str,
    exponent_is_cocycle: bool,
    twist_identity_holds: bool,
    composable_pairs: usize,
    composable_triples: usize,
}

fn twist_verify(t: &TwistInput, tol: f64, out: &Output) -> Result<(), Failure> {
    out.json_only()?;
    let (doc, s) = load_twist_doc(t)?;
    let (f, mode) = doc.exponent(s)?;
    let s = f.semigroup().clone();
    // Values straight from the exponent, so a non-cocycle shows up as a
    // failed identity rather than a load error.
    let values: RawTwist = s
        .composable_tuples(2)
        .into_iter()
        .map(|p| {
            let x = f.get(&p);
            let m = match &mode {
                TwistMode::RealExponential(h) => Multiplier::Exp(h * x),
                TwistMode::Circle(tau) => Multiplier::turn(x / tau),
            };
            ((p[0], p[1]), m)
        })
        .collect();
    let r = VerifyReport {
        mode: match mode {
            TwistMode::RealExponential(_) => "real",
            TwistMode::Circle(_) => "circle",
        },
        exponent_is_cocycle: f.is_cocycle()?,
        twist_identity_holds: verify_twist(&s, &values, tol)?,
        composable_pairs: values.len(),
        composable_triples: s.composable_tuples(3).len(),
    };
    emit(out, json(&r))
}

#[derive(Serialize)]
struct TrivialReport {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<CochainJson>,
}

fn twist_trivial(t: &TwistInput, out: &Output) -> Result<(), Failure> {
    out.json_only()?;
    let (doc, s) = load_twist_doc(t)?;
    let twist = doc.to_twist(s)?;
    let r = match triviality_check(&twist, || false)? {
        Triviality::TrivialWith(g) => TrivialReport {
            verdict: "trivial",
            witness: Some(CochainJson::from_cochain(&g)),
        },
        Triviality::Nontrivial => TrivialReport {
            verdict: "nontrivial",
            witness: None,
        },
    };
    emit(out, json(&r))
}

fn star_eval(t: &TwistInput, left: &Path, right: &Path, out: &Output) -> Result<(), Failure> {
    out.json_only()?;
    let (doc, s) = load_twist_doc(t)?;
    let twist = doc.to_twist(s)?;
    let s = twist.semigroup().clone();
    let u = from_json::<AlgebraJson>(&read(left)?)?.to_element(s.clone())?;
    let v = from_json::<AlgebraJson>(&read(right)?)?.to_element(s)?;
    emit(
        out,
        json(&AlgebraJson::from_element(&star(&twist, &u, &v)?)),
    )
}

#[derive(Serialize)]
struct DebroglieRow {
    t: String,
    area_mod_h: String,
    phase_re: f64,
    phase_im: f64,
}

#[derive(Serialize)]
struct DebroglieReport {
    period: String,
    wavelength: String,
    rows: Vec<DebroglieRow>,
}

fn debroglie(a: &DebroglieArgs) -> Result<(), Failure> {
    if a.steps == 0 {
        return Err(Failure::usage("--steps must be positive"));
    }
    let period = free_particle_period(a.p.clone(), a.v.clone(), a.h.clone())?;
    let wavelength = de_broglie_wavelength(a.p.clone(), a.h.clone())?;
    let mut rows = Vec::with_capacity(a.steps as usize + 1);
    for k in 0..=a.steps {
        let t =
            &a.t_max * Rational::from_integer(k.into()) / Rational::from_integer(a.steps.into());
        let (area, phase) = free_particle_phase_exact(&a.p, &a.v, &t, &a.h)?;
        rows.push((t, area, phase));
    }
    let text = match a.out.format(Format::Csv) {
        Format::Csv => csv_table(
            &[
                "t",
                "area_mod_h",
                "phase_re",
                "phase_im",
                "t_exact",
                "area_mod_h_exact",
            ],
            rows.iter().map(|(t, area, z)| {
                vec![
                    fmt_g(to_f64(t)),
                    fmt_g(to_f64(area)),
                    fmt_g(z.re),
                    fmt_g(z.im),
                    format_rational(t),
                    format_rational(area),
                ]
            }),
        )?,
        Format::Json => json(&DebroglieReport {
            period: format_rational(&period),
            wavelength: format_rational(&wavelength),
            rows: rows
                .iter()
                .map(|(t, area, z)| DebroglieRow {
                    t: format_rational(t),
                    area_mod_h: format_rational(area),
                    phase_re: z.re,
                    phase_im: z.im,
                })
                .collect(),
        }),
    };
    emit(&a.out, text)
}

#[derive(Serialize)]
struct SphereRow {
    lambda: f64,
    area: Option<f64>,
    phase_re: Option<f64>,
    phase_im: Option<f64>,
    linear_fit_residual: Option<f64>,
}

#[derive(Serialize)]
struct SphereReport {
    slope: f64,
    nonlinearity: f64,
    rows: Vec<SphereRow>,
}

fn sphere_phase(colat: f64, lambda_max: f64, steps: u32, out: &Output) -> Result<(), Failure> {
    if steps == 0 {
        return Err(Failure::usage("--steps must be positive"));
    }
    let lambdas: Vec<f64> = (0..=steps)
        .map(|k| lambda_max * f64::from(k) / f64::from(steps))
        .collect();
    let radians: Vec<f64> = lambdas.iter().map(|l| l.to_radians()).collect();
    let theta0 = colat.to_radians();
    let r = equator_scenario(theta0, &radians)?;
    let rows: Vec<SphereRow> = r
        .points
        .iter()
        .zip(&lambdas)
        .map(|(p, &lambda)| SphereRow {
            lambda,
            area: p.sample.map(|s| s.area),
            phase_re: p.sample.map(|s| s.phase.re),
            phase_im: p.sample.map(|s| s.phase.im),
            linear_fit_residual: p.linear_fit_residual,
        })
        .collect();
    let cell = |x: Option<f64>| x.map(fmt_g).unwrap_or_default();
    let text = match out.format(Format::Csv) {
        Format::Csv => csv_table(
            &[
                "lambda",
                "area",
                "phase_re",
                "phase_im",
                "linear_fit_residual",
            ],
            rows.iter().map(|x| {
                vec![
                    fmt_g(x.lambda),
                    cell(x.area),
                    cell(x.phase_re),
                    cell(x.phase_im),
                    cell(x.linear_fit_residual),
                ]
            }),
        )?,
        Format::Json => json(&SphereReport {
            slope: r.slope,
            nonlinearity: r.nonlinearity,
            rows,
        }),
    };
    emit(out, text)
}

fn sphere_twist_export(tri: TriangulationArg, out: &Output) -> Result<(), Failure> {
    out.json_only()?;
    let tri = match tri {
        TriangulationArg::Tetrahedral => Triangulation::Tetrahedral,
        TriangulationArg::Octahedral => Triangulation::Octahedral,
    };
    let e = export_sphere_twist(tri)?;
    let mut doc = TwistJson::from_twist(&e.twist);
    doc.semigroup = Some(SemigroupJson::Table(table_to_json(&e.semigroup)));
    emit(out, json(&doc))
}

#[derive(Serialize)]
struct PmfRow {
    position: String,
    probability: String,
}

fn distribution(d: &LatticeDistribution, out: &Output) -> Result<String, Failure> {
    Ok(match out.format(Format::Csv) {
        Format::Csv => csv_table(
            &[
                "position",
                "probability",
                "position_exact",
                "probability_exact",
            ],
            d.iter().map(|(k, p)| {
                let x = d.position(k);
                vec![
                    fmt_g(to_f64(&x)),
                    fmt_g(to_f64(p)),
                    format_rational(&x),
                    format_rational(p),
                ]
            }),
        )?,
        Format::Json => json(
            &d.iter()
                .map(|(k, p)| PmfRow {
                    position: format_rational(&d.position(k)),
                    probability: format_rational(p),
                })
                .collect::<Vec<_>>(),
        ),
    })
}

#[derive(Serialize)]
struct CompareReport {
    steps: u32,
    prob: String,
    mean: f64,
    sigma: f64,
    max_cdf_gap: f64,
    max_cdf_gap_within_2sigma: f64,
    berry_esseen_bound: f64,
    gaussian_mass_outside_light_cone: f64,
    binomial_mass_outside_light_cone: String,
}

fn walk(cmd: &WalkCmd) -> Result<(), Failure> {
    match cmd {
        WalkCmd::Pmf { walk, out } => {
            let d = if walk.cells == 1 {
                exact_walk_pmf(walk.steps, &walk.prob)?
            } else {
                n_cell_mean_pmf(walk.steps, &walk.prob, walk.cells)?
            };
            emit(out, distribution(&d, out)?)
        }
        WalkCmd::Mc {
            walk,
            trials,
            seed,
            out,
        } => {
            let params = WalkParams::new(walk.prob.clone(), walk.steps, walk.cells, *seed)?;
            let d = monte_carlo_walk(&params, *trials)?;
            emit(out, distribution(&d, out)?)
        }
        WalkCmd::Compare { steps, prob, out } => {
            out.json_only()?;
            let r = gaussian_compare(*steps, prob)?;
            emit(
                out,
                json(&CompareReport {
                    steps: r.steps,
                    prob: format_rational(&r.prob),
                    mean: r.mean,
                    sigma: r.sigma,
                    max_cdf_gap: r.max_cdf_gap,
                    max_cdf_gap_within_2sigma: r.max_cdf_gap_within_2sigma,
                    berry_esseen_bound: r.berry_esseen_bound,
                    gaussian_mass_outside_light_cone: r.gaussian_mass_outside_light_cone,
                    binomial_mass_outside_light_cone: format_rational(
                        &r.binomial_mass_outside_light_cone,
                    ),
                }),
            )
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Semigroup(SemigroupCmd::Validate { input, out }) => {
            semigroup_validate(&input, &out)
        }
        Command::Cohomology(CohomologyCmd::Ranks {
            input,
            max_degree,
            cc0_zero,
            out,
        }) => cohomology_ranks(&input, max_degree, cc0_zero, &out),
        Command::Nerve(NerveCmd::Compare {
            input,
            max_degree,
            cc0_zero,
            out,
        }) => nerve_compare(&input, max_degree, cc0_zero, &out),
        Command::Twist(TwistCmd::Verify { twist, tol, out }) => twist_verify(&twist, tol, &out),
        Command::Twist(TwistCmd::Trivial { twist, out }) => twist_trivial(&twist, &out),
        Command::Star(StarCmd::Eval {
            twist,
            left,
            right,
            out,
        }) => star_eval(&twist, &left, &right, &out),
        Command::Debroglie(a) => debroglie(&a),
        Command::Sphere(SphereCmd::Phase {
            colat,
            lambda_max,
            steps,
            out,
        }) => sphere_phase(colat, lambda_max, steps, &out),
        Command::Sphere(SphereCmd::TwistExport { triangulation, out }) => {
            sphere_twist_export(triangulation, &out)
        }
        Command::Walk(cmd) => walk(&cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code as u8)
        }
    }
}
