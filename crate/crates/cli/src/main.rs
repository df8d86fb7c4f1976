use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jordan_core::amplification::{
    amplification_audit, amplify, complexify, two_positivity_test, Verdict,
};
use jordan_core::frame::{classify_two_dim_maximal, search_two_dim_maximal};
use jordan_core::poset::Variant;
use jordan_core::reconstruction::{
    certify_jordan, hypothesis_violation, induce_oracle, reconstruct,
    rr_atom_permutation_counterexample, spin_flip_counterexample, IsoOracle,
};
use jordan_core::spectral::{dyadic_expand, spectral_decompose_with_gap, DyadicDoc};
use jordan_core::suite::{demo, run_suite, SuiteConfig, SuiteReport};
use jordan_core::tolerance::{Tolerances, DELTA_CLUSTER, DYADIC_DIGITS};
use jordan_core::{random, Algebra, Element, LinearMap, PosetFragment};
use serde_json::{json, Value};

/// Jordan algebra verification toolkit.
#[derive(Parser)]
#[command(name = "jordan", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Samples per randomized check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Uniform numerical tolerance (overrides the defaults).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Omit timestamps and runtimes so reports are byte-reproducible.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral decomposition of an element.
    Spectral {
        /// Element JSON file, or `-` for stdin.
        element: PathBuf,
    },
    /// Greedy dyadic expansion x = Σ 2^-n p_n of an element with 0 ≤ x ≤ 1.
    Dyadic {
        element: PathBuf,
        #[arg(long, default_value_t = DYADIC_DIGITS)]
        digits: usize,
    },
    /// Associative subalgebra fragments.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Induce the frame oracle of a map on a fragment.
    Oracle {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random Jordan automorphism of a descriptor, as a map JSON.
    Automorphism {
        #[arg(long)]
        descriptor: PathBuf,
        /// Compose with the transpose on hermitian factors.
        #[arg(long)]
        transpose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild a Jordan map from a poset isomorphism oracle.
    Reconstruct {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value = "asu")]
        variant: Variant,
        /// Where to write the reconstructed map.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2-positivity and amplification audit of a map on Herm(n, C).
    AmplifyTest {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Run the verification suite for one descriptor.
    Suite {
        /// Full config JSON `{"descriptor":…, "seed":…, "samples":…}`.
        #[arg(long, conflicts_with = "descriptor")]
        config: Option<PathBuf>,
        /// Descriptor JSON; seed and samples come from the global flags.
        #[arg(long)]
        descriptor: Option<PathBuf>,
    },
    /// Named counterexample with a narrative report.
    Demo {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(jordan_core::suite::DEMOS))]
        name: String,
    },
    /// Counterexample certificates in full detail.
    #[command(subcommand)]
    Counterexample(CounterexampleCommand),
}

#[derive(Subcommand)]
enum PosetCommand {
    /// Build a fragment from elements (or from random elements).
    Build {
        /// JSON array of elements.
        #[arg(long, conflicts_with = "random")]
        elements: Option<PathBuf>,
        /// Number of random generic elements drawn from `--descriptor`.
        #[arg(long, requires = "descriptor")]
        random: Option<usize>,
        #[arg(long)]
        descriptor: Option<PathBuf>,
        #[arg(long, default_value = "as")]
        variant: Variant,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Indices and frames of the atoms of a fragment.
    Atoms {
        #[arg(long)]
        fragment: PathBuf,
        #[arg(long, default_value = "as")]
        variant: Variant,
    },
    /// Height of every frame.
    Height {
        #[arg(long)]
        fragment: PathBuf,
    },
    /// Maximality of every unital frame.
    Maximal {
        #[arg(long)]
        fragment: PathBuf,
    },
    /// Whether the descriptor has a two-dimensional maximal associative subalgebra.
    Classify {
        #[arg(long)]
        descriptor: PathBuf,
    },
}

#[derive(Subcommand)]
enum CounterexampleCommand {
    /// The flip λ1 + v ↦ λ1 − v on V_n.
    SpinFlip {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Atom permutations of R ⊕ R.
    RrPermutation,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_descriptor(path: &Path) -> Result<Algebra> {
    Ok(Algebra::from_json(&read_input(path)?)?)
}

fn read_fragment(path: &Path) -> Result<PosetFragment> {
    Ok(PosetFragment::from_json(&read_input(path)?)?)
}

fn read_map(path: &Path) -> Result<LinearMap> {
    Ok(LinearMap::from_json(&read_input(path)?)?)
}

struct Output {
    pretty: bool,
}

impl Output {
    fn render(&self, v: &Value) -> String {
        if self.pretty {
            serde_json::to_string_pretty(v).expect("json value")
        } else {
            serde_json::to_string(v).expect("json value")
        }
    }

    fn print(&self, v: &Value) {
        use std::io::Write;
        // a closed pipe (`| head`) is not an error worth reporting
        let _ = writeln!(std::io::stdout().lock(), "{}", self.render(v));
    }

    fn write_or_print(&self, out: &Option<PathBuf>, v: &Value) -> Result<()> {
        match out {
            Some(p) => std::fs::write(p, self.render(v) + "\n")
                .with_context(|| format!("writing {}", p.display())),
            None => {
                self.print(v);
                Ok(())
            }
        }
    }
}

fn report_value(report: SuiteReport, no_timestamp: bool) -> (bool, Value) {
    let report = if no_timestamp {
        report.without_timing()
    } else {
        report
    };
    (
        report.passed,
        serde_json::to_value(&report).expect("report serializes"),
    )
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let out = Output { pretty: g.pretty };
    let tolerances = g.tol.map(Tolerances::uniform).unwrap_or_default();

    match cli.command {
        Command::Spectral { element } => {
            let x = Element::from_json(&read_input(&element)?)?;
            let gap = g.tol.map_or(DELTA_CLUSTER, |_| tolerances.cluster);
            out.print(&serde_json::to_value(
                spectral_decompose_with_gap(&x, gap).to_doc(),
            )?);
            Ok(true)
        }
        Command::Dyadic { element, digits } => {
            let x = Element::from_json(&read_input(&element)?)?;
            let e = dyadic_expand(&x, digits)?;
            let mut v = serde_json::to_value(DyadicDoc::from(&e))?;
            v["bound"] = json!(0.5f64.powi(digits as i32));
            out.print(&v);
            Ok(true)
        }
        Command::Poset(cmd) => poset(cmd, g, &out),
        Command::Oracle {
            fragment,
            map,
            out: path,
        } => {
            let frag = read_fragment(&fragment)?;
            let psi = certify_jordan(&read_map(&map)?).map_err(|a| {
                anyhow::anyhow!(
                    "map is not a Jordan isomorphism (max residual {:.3e})",
                    a.report.max_residual
                )
            })?;
            let oracle = induce_oracle(&psi, &frag)?;
            out.write_or_print(&path, &serde_json::to_value(oracle.to_doc())?)?;
            Ok(true)
        }
        Command::Automorphism {
            descriptor,
            transpose,
            out: path,
        } => {
            let a = read_descriptor(&descriptor)?;
            let m = random::automorphism(&a, transpose, &mut random::rng(g.seed));
            out.write_or_print(&path, &serde_json::from_str(&m.to_json())?)?;
            Ok(true)
        }
        Command::Reconstruct {
            fragment,
            oracle,
            variant,
            out: path,
        } => {
            let frag = read_fragment(&fragment)?;
            let oracle = IsoOracle::from_json(&read_input(&oracle)?)?;
            match reconstruct(&oracle, &frag, variant) {
                Ok(rec) => {
                    if let Some(p) = &path {
                        std::fs::write(p, rec.map.to_json() + "\n")
                            .with_context(|| format!("writing {}", p.display()))?;
                    }
                    let mut v = json!({
                        "passed": true,
                        "variant": variant,
                        "unique": rec.unique,
                        "constraint_rank": rec.constraint_rank,
                        "residual": rec.residual,
                        "audits": rec.audits,
                    });
                    if path.is_none() {
                        v["map"] = serde_json::from_str(&rec.map.to_json())?;
                    }
                    out.print(&v);
                    Ok(true)
                }
                Err(e) => {
                    out.print(&json!({
                        "passed": false,
                        "variant": variant,
                        "stage": e.stage,
                        "message": e.message,
                        "audits": e.audits,
                    }));
                    Ok(false)
                }
            }
        }
        Command::AmplifyTest { map, n, trials } => {
            let m = read_map(&map)?;
            if m.domain() != &Algebra::herm(n, jordan_core::Field::Complex) {
                bail!("map domain is {}, expected Herm({n},ℂ)", m.domain());
            }
            let psi = match certify_jordan(&m) {
                Ok(psi) => psi,
                Err(audit) => {
                    out.print(&json!({ "passed": false, "jordan": audit.report }));
                    return Ok(false);
                }
            };
            let mut rng = random::rng(g.seed);
            let positivity = two_positivity_test(&psi, trials, &mut rng)?;
            let audit = amplification_audit(
                &psi,
                &amplify(&complexify(&psi)?),
                g.samples.unwrap_or(20),
                &mut rng,
            )?;
            let passed = audit.verdict == Verdict::StarIsomorphism;
            out.print(
                &json!({ "passed": passed, "two_positivity": positivity, "amplification": audit }),
            );
            Ok(passed)
        }
        Command::Suite { config, descriptor } => {
            let mut cfg = match (config, descriptor) {
                (Some(c), _) => SuiteConfig::from_json(&read_input(&c)?)?,
                (None, Some(d)) => {
                    SuiteConfig::new(read_descriptor(&d)?, g.seed, g.samples.unwrap_or(50))
                }
                (None, None) => bail!("suite needs --config or --descriptor"),
            };
            if let Some(s) = g.samples {
                cfg.samples = s;
            }
            if g.tol.is_some() {
                cfg.tolerances = tolerances;
            }
            let (passed, v) = report_value(run_suite(&cfg), g.no_timestamp);
            out.print(&v);
            Ok(passed)
        }
        Command::Demo { name } => {
            let (passed, v) = report_value(demo(&name, g.seed)?, g.no_timestamp);
            out.print(&v);
            Ok(passed)
        }
        Command::Counterexample(CounterexampleCommand::SpinFlip { n }) => {
            let (map, report) = spin_flip_counterexample(n, g.samples.unwrap_or(50), g.seed)?;
            out.print(&json!({
                "passed": report.passed,
                "report": report,
                "map": serde_json::from_str::<Value>(&map.to_json())?,
            }));
            Ok(report.passed)
        }
        Command::Counterexample(CounterexampleCommand::RrPermutation) => {
            let report = rr_atom_permutation_counterexample()?;
            out.print(&json!({ "passed": report.passed, "report": report }));
            Ok(report.passed)
        }
    }
}

fn poset(cmd: PosetCommand, g: &Global, out: &Output) -> Result<bool> {
    match cmd {
        PosetCommand::Build {
            elements,
            random: count,
            descriptor,
            variant,
            out: path,
        } => {
            let (algebra, xs) = match (elements, count) {
                (Some(e), _) => {
                    let xs: Vec<Element> =
                        serde_json::from_str(&read_input(&e)?).context("parsing element array")?;
                    let Some(first) = xs.first() else {
                        bail!("element array is empty")
                    };
                    let algebra = match &descriptor {
                        Some(d) => read_descriptor(d)?,
                        None => first.algebra().clone(),
                    };
                    if xs.iter().any(|x| x.algebra() != &algebra) {
                        bail!("elements do not share the descriptor {algebra}");
                    }
                    (algebra, xs)
                }
                (None, Some(k)) => {
                    let algebra =
                        read_descriptor(descriptor.as_deref().expect("required by clap"))?;
                    let mut rng = random::rng(g.seed);
                    let xs = (0..k)
                        .map(|_| random::element(&algebra, &mut rng))
                        .collect();
                    (algebra, xs)
                }
                (None, None) => bail!("poset build needs --elements or --random"),
            };
            let frag = PosetFragment::build(&algebra, variant, &xs)?;
            out.write_or_print(&path, &serde_json::to_value(frag.to_doc())?)?;
            Ok(true)
        }
        PosetCommand::Atoms { fragment, variant } => {
            let frag = read_fragment(&fragment)?;
            let atoms: Vec<Value> = frag
                .atoms(variant)
                .into_iter()
                .map(|i| json!({ "index": i, "frame": frag.frames()[i].to_doc() }))
                .collect();
            out.print(&json!({ "variant": variant, "atoms": atoms }));
            Ok(true)
        }
        PosetCommand::Height { fragment } => {
            let frag = read_fragment(&fragment)?;
            out.print(&json!({ "heights": frag.heights() }));
            Ok(true)
        }
        PosetCommand::Maximal { fragment } => {
            let frag = read_fragment(&fragment)?;
            out.print(&json!({ "maximal": frag.maximal_flags() }));
            Ok(true)
        }
        PosetCommand::Classify { descriptor } => {
            let a = read_descriptor(&descriptor)?;
            let classified = classify_two_dim_maximal(&a);
            let searched =
                search_two_dim_maximal(&a, g.samples.unwrap_or(64), &mut random::rng(g.seed));
            out.print(&json!({
                "descriptor": a,
                "two_dim_maximal": classified,
                "search_agrees": classified == searched,
                "asu_hypothesis": hypothesis_violation(&a, Variant::Asu).is_none(),
                "as_hypothesis": hypothesis_violation(&a, Variant::As).is_none(),
            }));
            Ok(classified == searched)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
