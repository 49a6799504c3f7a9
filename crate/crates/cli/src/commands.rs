use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twist_core::chen::{bar_model_homology, build_formal_connection, splitting_from_dga, verify_formal_connection};
use twist_core::coalgebra::{convolution_algebra, DgCoalgebra};
use twist_core::deformation::{
    compare_equivalences, def_points, mc_extend, series_mc_residuals, ArtinLocalRing, DeformationProblem, McExtension,
};
use twist_core::dga::{DgAlgebra, Equivalence, Orbit, TwistingCheck};
use twist_core::dgl::DgLieAlgebra;
use twist_core::hochschild::{bracket_unbounded, deform_product, hh_cohomology, AssocAlgebra, HochschildComplex};
use twist_core::{Error, GradedModule, Limits, Ring, Vector};

use crate::elements::{format_cochain, format_element, parse_cochain, parse_element};
use crate::presentation::{load, to_json, to_presentation, Loaded};
use crate::{CliError, Computed};

#[derive(Debug, Parser)]
#[command(
    name = "twist",
    version,
    about = "Twisting elements, Maurer-Cartan equations and deformations, computed exactly"
)]
pub struct Cli {
    #[command(flatten)]
    pub bounds: Bounds,
    #[command(subcommand)]
    pub command: Command,
}

/// Guards on every enumeration and series computation.
#[derive(Debug, Args)]
pub struct Bounds {
    /// Largest component dimension that may be enumerated.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_dim: usize,
    /// Largest series order for extensions and deformations.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_order: usize,
    /// Word length for formal connections.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_length: usize,
    /// Integer range tried in searches over infinite rings.
    #[arg(long, global = true, default_value_t = 1000)]
    pub search_bound: u64,
    /// Worker threads for the parallel enumerations.
    #[arg(long, global = true, env = "TWIST_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Emit {
    Canonical,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load and validate a presentation.
    Validate {
        file: PathBuf,
        /// Print the canonical presentation instead of a report.
        #[arg(long)]
        emit: Option<Emit>,
    },
    /// Twisting elements of a DGA.
    #[command(subcommand)]
    Twist(TwistCmd),
    /// The unit group action on twisting elements.
    #[command(subcommand)]
    Gauge(GaugeCmd),
    /// Maurer-Cartan deformation problems of a DGL.
    #[command(subcommand)]
    Defo(DefoCmd),
    /// Hochschild cochains of an associative algebra.
    #[command(subcommand)]
    Hh(HhCmd),
    /// Formal power series connections of a DGA.
    #[command(subcommand)]
    Chen(ChenCmd),
}

#[derive(Debug, Subcommand)]
pub enum TwistCmd {
    /// Decide whether an element is twisting.
    Check {
        file: PathBuf,
        #[arg(long)]
        element: String,
    },
    /// List all twisting elements (finite scalars).
    Enumerate { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GaugeCmd {
    /// Apply `x * y = x y x⁻¹ + (Dx) x⁻¹`.
    Act {
        file: PathBuf,
        #[arg(long)]
        unit: String,
        #[arg(long)]
        element: String,
    },
    /// Twisting elements modulo the gauge action.
    Orbit { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum DefoCmd {
    /// MC elements of `g ⊗ m` modulo the gauge group.
    Points {
        file: PathBuf,
        /// Artinian coefficients such as `Fp:5[t]/t^3`.
        #[arg(long)]
        ring: String,
    },
    /// Extend a first-order MC solution order by order.
    Extend {
        file: PathBuf,
        /// Defaults to the first basis element of degree -1.
        #[arg(long)]
        gamma1: Option<String>,
        #[arg(long)]
        order: usize,
    },
    /// Compare the unit_group and deligne equivalences of two twisting cochains.
    Compare {
        coalgebra: PathBuf,
        algebra: PathBuf,
        #[arg(long)]
        tau1: String,
        #[arg(long)]
        tau2: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum HhCmd {
    /// Hochschild differential of a cochain.
    Diff {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        cochain: String,
    },
    /// Gerstenhaber bracket of two cochains.
    Bracket {
        file: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        arity_f: usize,
        #[arg(long)]
        g: String,
        #[arg(long)]
        arity_g: usize,
    },
    /// `HH^n` for `n` up to the given degree.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
    /// Associativity of `μ + Σ γ_k t^k`, order by order.
    Deform {
        file: PathBuf,
        /// The 2-cochain `γ_k`; repeat once per order.
        #[arg(long = "gamma", required = true)]
        gammas: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChenCmd {
    /// Build `(ω, δ)` up to `--max-length`.
    Build { file: PathBuf },
    /// Build and check the twisting identity word by word.
    Verify { file: PathBuf },
}

impl Bounds {
    fn limits(&self) -> Limits {
        Limits { max_dim: self.max_dim, search_bound: self.search_bound, jobs: self.jobs.max(1), ..Limits::default() }
    }

    fn order(&self, what: &str, n: usize) -> Result<(), CliError> {
        if n > self.max_order {
            return Err(Error::ResourceBound(format!("{what} {n} exceeds --max-order {}", self.max_order)).into());
        }
        Ok(())
    }
}

fn dga(path: &Path) -> Result<DgAlgebra, CliError> {
    match load(path)? {
        Loaded::Dga(a) => Ok(a),
        Loaded::Assoc(b) => Ok(b.dga().clone()),
        other => Err(wrong_kind(path, "dga", &other)),
    }
}

fn dgl(path: &Path) -> Result<DgLieAlgebra, CliError> {
    match load(path)? {
        Loaded::Dgl(l) => Ok(l),
        other => Err(wrong_kind(path, "dgl", &other)),
    }
}

fn assoc(path: &Path) -> Result<AssocAlgebra, CliError> {
    match load(path)? {
        Loaded::Assoc(b) => Ok(b),
        Loaded::Dga(a) => Ok(AssocAlgebra::new(a)?),
        other => Err(wrong_kind(path, "assoc", &other)),
    }
}

fn coalgebra(path: &Path) -> Result<DgCoalgebra, CliError> {
    match load(path)? {
        Loaded::Coalgebra(c) => Ok(c),
        other => Err(wrong_kind(path, "coalgebra", &other)),
    }
}

fn wrong_kind(path: &Path, want: &str, got: &Loaded) -> CliError {
    CliError::Usage(format!("{} has kind {}, expected {want}", path.display(), got.kind().as_str()))
}

fn fmt_all(m: &GradedModule, vs: &[Vector]) -> Vec<String> {
    vs.iter().map(|v| format_element(m, v)).collect()
}

fn orbits_json(m: &GradedModule, orbits: &[Orbit]) -> Value {
    json!(orbits
        .iter()
        .map(|o| json!({ "representative": format_element(m, &o.representative), "members": fmt_all(m, &o.members) }))
        .collect::<Vec<_>>())
}

fn equivalence_json(m: &GradedModule, e: &Equivalence<Vector>) -> Value {
    match e {
        Equivalence::Equivalent(w) => json!({ "verdict": "equivalent", "witness": format_element(m, w) }),
        Equivalence::Inequivalent => json!({ "verdict": "inequivalent" }),
        Equivalence::Undecided { bound } => json!({ "verdict": "undecided", "bound": bound }),
    }
}

impl Cli {
    pub fn execute(&self) -> Result<Computed, CliError> {
        let b = &self.bounds;
        let lim = b.limits();
        match &self.command {
            Command::Validate { file, emit } => {
                let obj = load(file)?;
                if emit.is_some() {
                    return Ok(Computed {
                        result: Value::Null,
                        undecided: false,
                        raw: Some(to_json(&to_presentation(&obj))),
                    });
                }
                let m = obj.module();
                Ok(Computed::report(json!({
                    "valid": true,
                    "kind": obj.kind().as_str(),
                    "scalars": m.ring().descriptor(),
                    "dim": m.dim(),
                })))
            }
            Command::Twist(TwistCmd::Check { file, element }) => {
                let a = dga(file)?;
                let tau = parse_element(a.module(), element)?;
                let twisting = matches!(a.is_twisting_element(&tau)?, TwistingCheck::Twisting(_));
                Ok(Computed::report(json!({
                    "element": format_element(a.module(), &tau),
                    "twisting": twisting,
                    "residual": format_element(a.module(), &a.twisting_residual(&tau)),
                })))
            }
            Command::Twist(TwistCmd::Enumerate { file }) => {
                let a = dga(file)?;
                let all: Vec<Vector> =
                    a.enumerate_twisting_elements(&lim)?.into_iter().map(|t| t.into_element()).collect();
                Ok(Computed::report(json!({ "count": all.len(), "twisting_elements": fmt_all(a.module(), &all) })))
            }
            Command::Gauge(GaugeCmd::Act { file, unit, element }) => {
                let a = dga(file)?;
                let m = a.module();
                let x = parse_element(m, unit)?;
                let x = a.unit_element(&x)?.ok_or_else(|| Error::NotInvertible(format_element(m, &x)))?;
                let y = a.twisting_element(&parse_element(m, element)?)?;
                let moved = a.gauge_act(&x, &y)?;
                Ok(Computed::report(json!({
                    "unit": format_element(m, x.element()),
                    "inverse": format_element(m, x.inverse()),
                    "element": format_element(m, y.element()),
                    "result": format_element(m, moved.element()),
                })))
            }
            Command::Gauge(GaugeCmd::Orbit { file }) => {
                let a = dga(file)?;
                let orbits = a.functor_d(&lim)?;
                Ok(Computed::report(json!({ "orbit_count": orbits.len(), "orbits": orbits_json(a.module(), &orbits) })))
            }
            Command::Defo(DefoCmd::Points { file, ring }) => {
                let g = dgl(file)?;
                let coeffs = ArtinLocalRing::from_ring(&Ring::parse_descriptor(ring)?)?;
                let problem = DeformationProblem::new(&g, &coeffs)?;
                let orbits = def_points(&problem, &lim)?;
                let m = problem.lie().module();
                Ok(Computed::report(json!({
                    "ring": coeffs.ring().descriptor(),
                    "mc_count": orbits.iter().map(|o| o.members.len()).sum::<usize>(),
                    "orbit_count": orbits.len(),
                    "orbits": orbits_json(m, &orbits),
                })))
            }
            Command::Defo(DefoCmd::Extend { file, gamma1, order }) => {
                b.order("order", *order)?;
                let g = dgl(file)?;
                let m = g.module();
                let gamma1 = match gamma1 {
                    Some(s) => parse_element(m, s)?,
                    None => {
                        let first =
                            m.component(-1).first().copied().ok_or_else(|| {
                                CliError::Usage("no basis element of degree -1; pass --gamma1".into())
                            })?;
                        m.basis_vector(first)
                    }
                };
                let result = match mc_extend(&g, &gamma1, *order)? {
                    McExtension::Solved(gammas) => {
                        let residuals = series_mc_residuals(&g, &gammas)?;
                        json!({
                            "verdict": "solved",
                            "gammas": fmt_all(m, &gammas),
                            "residuals_vanish": residuals.iter().all(Vector::is_zero),
                        })
                    }
                    McExtension::Obstructed(r) => json!({
                        "verdict": "obstructed",
                        "obstruction": {
                            "order": r.order,
                            "cocycle": format_element(m, &r.cocycle),
                            "class": r.class.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                            "classes": fmt_all(m, &r.classes),
                            "partial": fmt_all(m, &r.partial),
                        },
                    }),
                };
                let mut report = json!({ "gamma1": format_element(m, &gamma1), "order": order });
                for (k, v) in result.as_object().expect("object literal") {
                    report[k] = v.clone();
                }
                Ok(Computed::report(report))
            }
            Command::Defo(DefoCmd::Compare { coalgebra: cpath, algebra, tau1, tau2 }) => {
                let c = coalgebra(cpath)?;
                let a = dga(algebra)?;
                let conv = convolution_algebra(&c, &a)?;
                let hom = conv.hom();
                let hm = hom.module();
                let t1 = hom.map_of(&parse_element(hm, tau1)?, -1)?;
                let t2 = hom.map_of(&parse_element(hm, tau2)?, -1)?;
                let report = compare_equivalences(&c, &a, &t1, &t2, &lim)?;
                let undecided = matches!(report.unit_group, Equivalence::Undecided { .. })
                    || matches!(report.deligne, Equivalence::Undecided { .. });
                Ok(Computed {
                    result: json!({
                        "tau1": format_element(hm, &hom.element_of(&t1)?),
                        "tau2": format_element(hm, &hom.element_of(&t2)?),
                        "unit_group": equivalence_json(hm, &report.unit_group),
                        "deligne": equivalence_json(hm, &report.deligne),
                    }),
                    undecided,
                    raw: None,
                })
            }
            Command::Hh(HhCmd::Diff { file, arity, cochain }) => {
                let bb = assoc(file)?;
                let f = parse_cochain(&bb, *arity, cochain)?;
                let hc = HochschildComplex::new(&bb, (arity + 1).max(2))?;
                let df = hc.differential(&f)?;
                Ok(Computed::report(json!({
                    "cochain": format_cochain(&bb, &f),
                    "arity": arity,
                    "differential": format_cochain(&bb, &df),
                })))
            }
            Command::Hh(HhCmd::Bracket { file, f, arity_f, g, arity_g }) => {
                let bb = assoc(file)?;
                let (f, g) = (parse_cochain(&bb, *arity_f, f)?, parse_cochain(&bb, *arity_g, g)?);
                let br = bracket_unbounded(&f, &g)?;
                Ok(Computed::report(json!({ "arity": br.arity(), "bracket": format_cochain(&bb, &br) })))
            }
            Command::Hh(HhCmd::Cohomology { file, max_degree }) => {
                b.order("degree", *max_degree)?;
                let bb = assoc(file)?;
                let hc = HochschildComplex::new(&bb, (max_degree + 1).max(2))?;
                let degrees = (0..=*max_degree)
                    .map(|n| {
                        let h = hh_cohomology(&hc, n)?;
                        let basis: Vec<String> = h.basis.iter().map(|c| format_cochain(&bb, c)).collect();
                        Ok(json!({ "degree": n, "dim": h.dim, "basis": basis }))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Computed::report(json!({ "normalized": bb.unit_index().is_some(), "degrees": degrees })))
            }
            Command::Hh(HhCmd::Deform { file, gammas }) => {
                b.order("order", gammas.len())?;
                let bb = assoc(file)?;
                let gs = gammas.iter().map(|s| parse_cochain(&bb, 2, s)).collect::<Result<Vec<_>, _>>()?;
                let d = deform_product(&bb, &gs)?;
                let m = bb.module();
                let orders: Vec<Value> = d
                    .orders
                    .iter()
                    .map(|o| {
                        json!({
                            "order": o.order,
                            "associative": o.associative,
                            "failing_triple": o.failing_triple.map(|t| t.map(|i| m.name(i).to_string())),
                            "mc_residual": format_cochain(&bb, &o.mc_residual),
                        })
                    })
                    .collect();
                Ok(Computed::report(json!({
                    "ring": d.ring.descriptor(),
                    "associative": d.associative(),
                    "orders": orders,
                })))
            }
            Command::Chen(cmd) => {
                let (file, verify) = match cmd {
                    ChenCmd::Build { file } => (file, false),
                    ChenCmd::Verify { file } => (file, true),
                };
                let a = dga(file)?;
                let fc = build_formal_connection(&splitting_from_dga(&a)?, b.max_length)?;
                let (am, v) = (a.module(), fc.generators());
                let generators: Vec<Value> = (0..v.dim())
                    .map(|i| {
                        json!({
                            "name": v.name(i),
                            "degree": v.degree(i),
                            "representative": format_element(am, &fc.representatives()[i]),
                        })
                    })
                    .collect();
                let words = fc.tensor().words().len();
                let sparse = |value: &dyn Fn(usize) -> (bool, String)| -> Vec<Value> {
                    (0..words)
                        .filter_map(|w| {
                            let (nonzero, s) = value(w);
                            nonzero.then(|| json!({ "word": fc.word_name(w), "value": s }))
                        })
                        .collect()
                };
                let omega = sparse(&|w| (!fc.omega(w).is_zero(), format_element(am, fc.omega(w))));
                let delta = sparse(&|w| (!fc.corestriction(w).is_zero(), format_element(v, fc.corestriction(w))));
                let mut result = json!({
                    "max_length": fc.max_length(),
                    "words": words,
                    "generators": generators,
                    "omega": omega,
                    "delta": delta,
                });
                if verify {
                    let r = verify_formal_connection(&a, &fc)?;
                    let lengths: Vec<Value> = r
                        .residuals
                        .iter()
                        .map(|l| {
                            json!({
                                "length": l.length,
                                "words": l.words,
                                "violations": l.violations,
                                "first_violation": l.first_violation,
                            })
                        })
                        .collect();
                    let homology: serde_json::Map<String, Value> =
                        bar_model_homology(&fc)?.into_iter().map(|(k, d)| (k.to_string(), json!(d))).collect();
                    result = json!({
                        "max_length": fc.max_length(),
                        "ok": r.ok(),
                        "residuals": lengths,
                        "normalization_failures": r.normalization,
                        "coderivation": r.coderivation,
                        "square_zero": r.square_zero,
                        "bar_model_homology": homology,
                    });
                }
                Ok(Computed::report(result))
            }
        }
    }
}
