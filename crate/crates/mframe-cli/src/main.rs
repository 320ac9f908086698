//! Command line front end: frame analysis, duals, dilation, pair
//! classification, decompositions, grid demos and bracket products.
//!
//! Exit codes: 0 on success, 2 when a certificate or precondition fails
//! (the input is not a frame, a decomposition does not exist, a dilation
//! certificate is violated), 1 on usage or parse errors.

mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mframe::error::Error;
use mframe::fileio;
use mframe::fixture;
use mframe::frame::Frame;
use mframe::{decomp, dilation, disjoint, wavelet};

use reports::*;

#[derive(Parser)]
#[command(
    name = "mframe",
    version,
    about = "Frame analysis for Hilbert modules over block C*-algebras",
    after_help = "Exit codes: 0 success, 1 usage or parse error, 2 certificate failure."
)]
struct Cli {
    /// Relative tolerance for all certificates (defaults to MFRAME_TOL or 1e-9)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for randomized spot checks and fixture generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit a machine-readable JSON report on stdout
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report bounds, tightness, Riesz and verification certificates
    Analyze { frame: PathBuf },
    /// Write the canonical dual frame
    Dual {
        frame: PathBuf,
        /// Output path for the dual frame file
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Dilate to an orthogonal Hilbert basis (tight input) or Riesz basis
    Dilate {
        frame: PathBuf,
        /// Output path for the complement frame file
        #[arg(long)]
        out_complement: Option<PathBuf>,
        /// Output path for the dilated basis frame file
        #[arg(long)]
        out_dilated: Option<PathBuf>,
    },
    /// Classify the relative position of two frames
    Classify { first: PathBuf, second: PathBuf },
    /// Decompose a frame (or its synthesis operator) into certified parts
    Decompose {
        frame: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        /// Shift parameter for the methods that take one
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Write the full JSON report (with parts) to this path
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Built-in grid examples
    Demo {
        #[command(subcommand)]
        demo: DemoCommand,
    },
    /// Bracket product of two sampled functions
    Bracket { first: PathBuf, second: PathBuf },
    /// Write seeded random frame files
    Fixture {
        #[arg(long, value_enum)]
        kind: FixtureKind,
        /// Output path (first frame for pair kinds)
        #[arg(short, long)]
        output: PathBuf,
        /// Output path of the second frame for pair kinds
        #[arg(long)]
        output_second: Option<PathBuf>,
        /// Number of frame elements
        #[arg(long, default_value_t = 4)]
        elements: usize,
        /// Algebra block dimensions
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 1])]
        blocks: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Partition-of-unity frame on the dyadic grid
    Cantor {
        #[arg(long, default_value_t = 6)]
        levels: u32,
    },
    /// Collapse of the single-generator lower bound
    SingleGenerator {
        #[arg(long, default_value_t = 6)]
        levels: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    ThreeUnitaries,
    TwoPartialIsometries,
    TwoTight,
    TwoOnb,
    ThreeOnb,
    HalfSum,
    OnbRiesz,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Snt,
    Standard,
    Riesz,
    DisjointPair,
    ComplementaryPair,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let tol = match resolve_tol(cli.tol) {
        Ok(tol) => tol,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(1);
        }
    };
    match run(&cli, tol) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var("MFRAME_TOL") {
        Ok(text) => text
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("MFRAME_TOL is not a number: {text:?}")),
        Err(_) => Ok(mframe::DEFAULT_TOL),
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NotAFrame { .. }
        | Error::Precondition(_)
        | Error::NotHermitian { .. }
        | Error::NotPositive { .. }
        | Error::Singular { .. } => 2,
        _ => 1,
    }
}

fn emit<T: Serialize>(json: bool, report: &T, human: String) -> Result<(), Error> {
    if json {
        print!("{}", fileio::canonical_json(report)?);
    } else {
        println!("{human}");
    }
    Ok(())
}

fn run(cli: &Cli, tol: f64) -> Result<u8, Error> {
    match &cli.command {
        Command::Analyze { frame } => {
            let frame = fileio::read_frame(frame, tol)?;
            let report = AnalyzeReport::new(&frame, tol, cli.seed);
            let human = format!(
                "algebra blocks: {:?}\nmodule rank: {} ({})\nelements: {}\n\
                 optimal bounds: ({:.12}, {:.12})\nis frame: {}\ntight: {}\n\
                 normalized tight: {}\nRiesz basis: {}\n\
                 verify at optimal bounds: {} (lower margin {:.3e}, upper margin {:.3e}, \
                 worst spot violation {:.3e})",
                report.algebra_blocks,
                report.rank,
                if report.free_module { "free" } else { "summand" },
                report.elements,
                report.bounds.0,
                report.bounds.1,
                report.is_frame,
                report.tight,
                report.normalized_tight,
                report.riesz.is_riesz_basis,
                if report.verify.pass { "pass" } else { "fail" },
                report.verify.lower_margin,
                report.verify.upper_margin,
                report.verify.worst_spot_violation,
            );
            emit(cli.json, &report, human)?;
            Ok(if report.is_frame && report.verify.pass { 0 } else { 2 })
        }

        Command::Dual { frame, output } => {
            let frame = fileio::read_frame(frame, tol)?;
            let dual = frame.canonical_dual(tol)?;
            fileio::write_frame(output, &dual)?;
            let mut rng = fixture::rng(cli.seed);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let x = fixture::random_module_vector(frame.module(), &mut rng);
                let (_, residual) = frame.reconstruct(&dual, &x)?;
                worst = worst.max(residual / (1.0 + x.norm()));
            }
            let report = DualReport {
                input_bounds: frame.optimal_bounds(),
                dual_bounds: dual.optimal_bounds(),
                max_reconstruction_residual: worst,
                output: output.display().to_string(),
            };
            let human = format!(
                "wrote canonical dual to {}\ninput bounds: ({:.12}, {:.12})\n\
                 dual bounds: ({:.12}, {:.12})\nmax relative reconstruction residual: {:.3e}",
                report.output,
                report.input_bounds.0,
                report.input_bounds.1,
                report.dual_bounds.0,
                report.dual_bounds.1,
                report.max_reconstruction_residual,
            );
            emit(cli.json, &report, human)?;
            Ok(0)
        }

        Command::Dilate {
            frame,
            out_complement,
            out_dilated,
        } => {
            let frame = fileio::read_frame(frame, tol)?;
            let (mode, result) = if frame.is_normalized_tight(tol) {
                ("tight", dilation::tight_complement(&frame, tol)?)
            } else {
                ("riesz", dilation::riesz_complement(&frame, tol)?)
            };
            if let Some(path) = out_complement {
                fileio::write_frame(path, &result.complement_frame)?;
            }
            if let Some(path) = out_dilated {
                fileio::write_frame(path, &result.dilated_basis)?;
            }
            let pass = result
                .ortho_certificate
                .as_ref()
                .map(|c| c.pass)
                .or_else(|| {
                    result
                        .riesz_certificate
                        .as_ref()
                        .map(|c| c.is_riesz_basis)
                })
                .unwrap_or(false);
            let report = DilateReport {
                mode,
                input_bounds: result.input_bounds,
                dilated_bounds: result.dilated_bounds,
                complement_rank: result.complement_module().rank(),
                ortho_certificate: result.ortho_certificate.clone(),
                riesz_certificate: result.riesz_certificate.clone(),
                pass,
                complement_output: out_complement.as_ref().map(|p| p.display().to_string()),
                dilated_output: out_dilated.as_ref().map(|p| p.display().to_string()),
            };
            let human = format!(
                "dilation mode: {}\ninput bounds: ({:.12}, {:.12})\n\
                 dilated bounds: ({:.12}, {:.12})\ncertificates: {}",
                report.mode,
                report.input_bounds.0,
                report.input_bounds.1,
                report.dilated_bounds.0,
                report.dilated_bounds.1,
                if pass { "pass" } else { "fail" },
            );
            emit(cli.json, &report, human)?;
            Ok(if pass { 0 } else { 2 })
        }

        Command::Classify { first, second } => {
            let a = fileio::read_frame(first, tol)?;
            let b = fileio::read_frame(second, tol)?;
            let classification = disjoint::classify_pair(&a, &b, tol)?;
            let strong = disjoint::strong_disjoint_conditions(&a, &b, tol.max(1e-8))?;
            let mut human = format!(
                "strongly complementary: {}\ncomplementary: {}\nstrongly disjoint: {}\n\
                 disjoint: {}\nweakly disjoint: {}\n|P - (I-Q)| = {:.3e}   |PQ| = {:.3e}\n\
                 spectrum of P+Q in [{:.6}, {:.6}]   margin of (P-Q)^2: {:.3e}\n\
                 strong-disjointness conditions ({}):",
                classification.strongly_complementary,
                classification.complementary,
                classification.strongly_disjoint,
                classification.disjoint,
                classification.weakly_disjoint,
                classification.complement_defect,
                classification.overlap,
                classification.sum_min_eigenvalue,
                classification.sum_max_eigenvalue,
                classification.difference_margin,
                if strong.agree { "agree" } else { "DISAGREE" },
            );
            for c in &strong.conditions {
                human.push_str(&format!(
                    "\n  [{}] {:<42} residual {:.3e}",
                    if c.pass { "pass" } else { "fail" },
                    c.label,
                    c.residual
                ));
            }
            let report = ClassifyReport {
                classification,
                strong_disjointness: strong,
            };
            emit(cli.json, &report, human)?;
            Ok(0)
        }

        Command::Decompose {
            frame,
            method,
            epsilon,
            output,
        } => {
            let frame = fileio::read_frame(frame, tol)?;
            let (report, ok) = decompose(&frame, *method, *epsilon, tol)?;
            if let Some(path) = output {
                std::fs::write(path, fileio::canonical_json(&report)?)?;
            }
            let mut human = format!(
                "method: {}\nsuccess: {}",
                report.method, report.success
            );
            if let Some(s) = report.scalar {
                human.push_str(&format!("\nscalar: {s:.12}"));
            }
            if let Some(c) = report.shift {
                human.push_str(&format!("\nshift: {c:.12}"));
            }
            if let Some(r) = report.residual {
                human.push_str(&format!("\nresidual: {r:.3e}"));
            }
            if let Some(note) = &report.note {
                human.push_str(&format!("\nnote: {note}"));
            }
            for p in &report.parts {
                human.push_str(&format!("\npart: {}", p.label));
                if let Some(d) = p.unitary_defect {
                    human.push_str(&format!("  unitary defect {d:.3e}"));
                }
                if let Some(d) = p.partial_isometry_defect {
                    human.push_str(&format!("  partial isometry defect {d:.3e}"));
                }
                if let Some((c, d)) = p.bounds {
                    human.push_str(&format!("  bounds ({c:.9}, {d:.9})"));
                }
                if let Some(riesz) = p.riesz {
                    human.push_str(&format!("  riesz {riesz}"));
                }
            }
            emit(cli.json, &report, human)?;
            Ok(if ok { 0 } else { 2 })
        }

        Command::Demo { demo } => match demo {
            DemoCommand::Cantor { levels } => {
                let frame = wavelet::cantor_frame(*levels)?;
                let x = wavelet::single_generator_frame(*levels)?.elements()[0].clone();
                let (_, residual) = frame.reconstruct(&frame, &x)?;
                let report = CantorReport {
                    levels: *levels,
                    grid_points: 1usize << levels,
                    elements: frame.len(),
                    partition_defect: wavelet::partition_defect(*levels),
                    bounds: frame.optimal_bounds(),
                    self_reconstruction_residual: residual,
                };
                let human = format!(
                    "levels: {}\ngrid points: {}\nelements: {}\n\
                     partition-of-unity defect: {:.3e}\noptimal bounds: ({:.12}, {:.12})\n\
                     self-dual reconstruction residual on t -> t: {:.3e}",
                    report.levels,
                    report.grid_points,
                    report.elements,
                    report.partition_defect,
                    report.bounds.0,
                    report.bounds.1,
                    report.self_reconstruction_residual,
                );
                emit(cli.json, &report, human)?;
                Ok(0)
            }
            DemoCommand::SingleGenerator { levels } => {
                let bounds: Vec<(u32, f64)> = (1..=*levels)
                    .map(|l| (l, wavelet::single_generator_bound(l)))
                    .collect();
                let report = SingleGeneratorReport {
                    levels: *levels,
                    bounds_per_level: bounds.clone(),
                    upper_bound: 1.0,
                };
                let mut human = String::from("single generator f(t) = t: lower bound collapses");
                for (l, b) in &bounds {
                    human.push_str(&format!("\n  level {l:>2}: lower bound {b:.3e}"));
                }
                emit(cli.json, &report, human)?;
                Ok(0)
            }
        },

        Command::Bracket { first, second } => {
            let phi = fileio::read_sampled_function(first)?;
            let psi = fileio::read_sampled_function(second)?;
            let b = wavelet::bracket(&phi, &psi)?;
            let report = BracketReport {
                samples_per_unit: phi.samples_per_unit(),
                values: b.values().iter().map(|z| (z.re, z.im)).collect(),
                max_deviation_from_unit: b.max_deviation_from(1.0),
                positive: b.as_alg_element().is_positive(tol),
            };
            let mut human = format!(
                "bracket on {} grid points (deviation from unit {:.3e}, positive {})",
                report.samples_per_unit, report.max_deviation_from_unit, report.positive
            );
            for (r, (re, im)) in report.values.iter().enumerate() {
                human.push_str(&format!("\n  t = {:>7.5}: {re:+.9} {im:+.9}i", r as f64 / report.samples_per_unit as f64));
            }
            emit(cli.json, &report, human)?;
            Ok(0)
        }

        Command::Fixture {
            kind,
            output,
            output_second,
            elements,
            blocks,
        } => {
            let descriptor = mframe::AlgebraDescriptor::new(blocks.clone())?;
            let mut rng = fixture::rng(cli.seed);
            let mut outputs = Vec::new();
            let kind_name;
            match kind {
                FixtureKind::Snt => {
                    kind_name = "snt";
                    let f = fixture::random_snt_frame(&descriptor, *elements, &mut rng);
                    fileio::write_frame(output, &f)?;
                    outputs.push(output.display().to_string());
                }
                FixtureKind::Standard => {
                    kind_name = "standard";
                    let f = fixture::random_standard_frame(&descriptor, *elements, &mut rng);
                    fileio::write_frame(output, &f)?;
                    outputs.push(output.display().to_string());
                }
                FixtureKind::Riesz => {
                    kind_name = "riesz";
                    let f = fixture::random_riesz_basis(&descriptor, *elements, &mut rng);
                    fileio::write_frame(output, &f)?;
                    outputs.push(output.display().to_string());
                }
                FixtureKind::DisjointPair => {
                    kind_name = "disjoint-pair";
                    let second = require_second(output_second)?;
                    let (a, b) = fixture::disjoint_pair(&descriptor, *elements, &mut rng);
                    fileio::write_frame(output, &a)?;
                    fileio::write_frame(second, &b)?;
                    outputs.push(output.display().to_string());
                    outputs.push(second.display().to_string());
                }
                FixtureKind::ComplementaryPair => {
                    kind_name = "complementary-pair";
                    let second = require_second(output_second)?;
                    let (a, b) = fixture::complementary_pair(&descriptor, *elements, &mut rng);
                    fileio::write_frame(output, &a)?;
                    fileio::write_frame(second, &b)?;
                    outputs.push(output.display().to_string());
                    outputs.push(second.display().to_string());
                }
            }
            let report = FixtureReport {
                kind: kind_name.to_string(),
                seed: cli.seed,
                outputs: outputs.clone(),
            };
            emit(cli.json, &report, format!("wrote {}", outputs.join(", ")))?;
            Ok(0)
        }
    }
}

fn require_second(path: &Option<PathBuf>) -> Result<&Path, Error> {
    path.as_deref().ok_or_else(|| Error::Validation {
        path: "--output-second".into(),
        reason: "pair fixtures need a second output path".into(),
    })
}

fn operator_part(label: &str, part: &decomp::LabeledPart) -> PartReport {
    PartReport {
        label: label.to_string(),
        operator: Some(fileio::operator_to_file(&part.operator)),
        frame: None,
        unitary_defect: Some(part.predicates.unitary_defect),
        partial_isometry_defect: Some(part.predicates.partial_isometry_defect),
        bounds: None,
        riesz: None,
    }
}

fn frame_part(label: &str, frame: &Frame, riesz: Option<bool>) -> PartReport {
    PartReport {
        label: label.to_string(),
        operator: None,
        frame: Some(fileio::frame_to_file(frame)),
        unitary_defect: None,
        partial_isometry_defect: None,
        bounds: Some(frame.optimal_bounds()),
        riesz,
    }
}

fn decompose(
    frame: &Frame,
    method: Method,
    epsilon: f64,
    tol: f64,
) -> Result<(DecomposeReport, bool), Error> {
    let threshold = tol.max(1e-9);
    match method {
        Method::ThreeUnitaries => {
            let d = decomp::three_unitaries(&frame.synthesis(), epsilon, threshold)?;
            let parts = d
                .parts
                .iter()
                .map(|p| operator_part(p.label, p))
                .collect();
            Ok((
                DecomposeReport {
                    method: "three-unitaries".into(),
                    success: true,
                    scalar: Some(d.scalar),
                    shift: None,
                    residual: Some(d.residual),
                    note: None,
                    parts,
                },
                true,
            ))
        }
        Method::TwoPartialIsometries => {
            let d = decomp::two_partial_isometries(&frame.synthesis(), threshold)?;
            let parts = d
                .parts
                .iter()
                .map(|p| operator_part(p.label, p))
                .collect();
            Ok((
                DecomposeReport {
                    method: "two-partial-isometries".into(),
                    success: true,
                    scalar: Some(d.scalar),
                    shift: None,
                    residual: Some(d.residual),
                    note: None,
                    parts,
                },
                true,
            ))
        }
        Method::TwoTight => {
            let d = decomp::frame_two_tight(frame, threshold)?;
            Ok((
                DecomposeReport {
                    method: "two-tight".into(),
                    success: true,
                    scalar: Some(d.multiplier),
                    shift: None,
                    residual: Some(d.max_residual),
                    note: None,
                    parts: vec![
                        frame_part("first tight frame", &d.tight_first, None),
                        frame_part("second tight frame", &d.tight_second, None),
                    ],
                },
                true,
            ))
        }
        Method::TwoOnb => match decomp::riesz_two_onb(frame, threshold)? {
            Some(d) => Ok((
                DecomposeReport {
                    method: "two-onb".into(),
                    success: true,
                    scalar: Some(d.multiplier),
                    shift: None,
                    residual: Some(d.max_residual),
                    note: None,
                    parts: vec![
                        frame_part("first orthonormal basis", &d.onb_first, None),
                        frame_part("second orthonormal basis", &d.onb_second, None),
                    ],
                },
                true,
            )),
            None => {
                let riesz = frame.riesz_report(threshold);
                let note = match riesz.witness {
                    Some(w) => format!(
                        "none: not a Riesz basis (kernel coefficient in block {} leaves \
                         summand {} with norm {:.3e})",
                        w.block, w.violating_index, w.summand_norm
                    ),
                    None => "none: synthesis operator is not invertible".to_string(),
                };
                Ok((
                    DecomposeReport {
                        method: "two-onb".into(),
                        success: false,
                        scalar: None,
                        shift: None,
                        residual: None,
                        note: Some(note),
                        parts: vec![],
                    },
                    false,
                ))
            }
        },
        Method::ThreeOnb => {
            let d = decomp::frame_three_onb(frame, epsilon, threshold)?;
            let labels = ["first", "second", "third"];
            let parts = d
                .onbs
                .iter()
                .zip(labels)
                .map(|(f, l)| frame_part(&format!("{l} orthonormal basis"), f, None))
                .collect();
            Ok((
                DecomposeReport {
                    method: "three-onb".into(),
                    success: true,
                    scalar: Some(d.multiplier),
                    shift: None,
                    residual: Some(d.max_residual),
                    note: Some(format!(
                        "synthesis norm {:.12}, upper bound {:.12}",
                        d.synthesis_norm, d.upper_bound
                    )),
                    parts,
                },
                true,
            ))
        }
        Method::HalfSum => {
            if frame.is_normalized_tight(threshold) {
                let d = decomp::tight_half_sum(frame, threshold)?;
                Ok((
                    DecomposeReport {
                        method: "half-sum".into(),
                        success: true,
                        scalar: Some(0.5),
                        shift: None,
                        residual: Some(d.max_residual),
                        note: Some("tight input: both halves are orthonormal bases".into()),
                        parts: vec![
                            frame_part("first orthonormal basis", &d.onb_first, None),
                            frame_part("second orthonormal basis", &d.onb_second, None),
                        ],
                    },
                    true,
                ))
            } else {
                let d = decomp::frame_half_sum_riesz(frame, threshold)?;
                Ok((
                    DecomposeReport {
                        method: "half-sum".into(),
                        success: true,
                        scalar: Some(0.5),
                        shift: None,
                        residual: Some(d.max_residual),
                        note: None,
                        parts: vec![
                            frame_part(
                                "first Riesz basis",
                                &d.riesz_first,
                                Some(d.riesz_reports.0.is_riesz_basis),
                            ),
                            frame_part(
                                "second Riesz basis",
                                &d.riesz_second,
                                Some(d.riesz_reports.1.is_riesz_basis),
                            ),
                        ],
                    },
                    true,
                ))
            }
        }
        Method::OnbRiesz => {
            let d = decomp::frame_onb_plus_riesz(frame, epsilon, threshold)?;
            Ok((
                DecomposeReport {
                    method: "onb-riesz".into(),
                    success: true,
                    scalar: Some(d.multiplier),
                    shift: Some(d.shift),
                    residual: Some(d.max_residual),
                    note: None,
                    parts: vec![
                        frame_part("orthonormal basis", &d.onb, None),
                        frame_part(
                            "Riesz basis",
                            &d.riesz,
                            Some(d.riesz_certificate.is_riesz_basis),
                        ),
                    ],
                },
                true,
            ))
        }
    }
}
