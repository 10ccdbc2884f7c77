use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;
use std::time::Duration;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Map, Value};

use schemata::cc::{
    cc_stable_models_bruteforce, cc_stable_models_via_schemes, cc_theory, nss_reduct, CcProgram,
    CcSupportFamily,
};
use schemata::equations::{equations as defining_equations, theory};
use schemata::fixpoint::{gl_operator, gl_reduct, is_stable_model, stable_models_bruteforce};
use schemata::lab::{
    check_antimonotone, exhaustive_antimonotone_tables, fsp_growth_probe, gl_table,
    random_antimonotone_table, verify_operator_realization, ProgramFamily,
};
use schemata::logic::all_models_with_timeout;
use schemata::schemes::{enumerate_schemes, stable_models_via_schemes, SupportFamily, SupportMode};
use schemata::{AtomSet, Error, Interpretation, Program, Theory, Universe};

use crate::{Method, Reduction};

pub struct Options {
    pub max_atoms: Option<usize>,
    pub timeout: Option<Duration>,
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input: unreadable file, syntax error, unknown atom.
    Usage(String),
    /// A well-formed request the engine could not complete.
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::CompoundHead { .. } | Error::UnknownAtom { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn check_size(opts: &Options, universe: &Universe) -> Result<()> {
    match opts.max_atoms {
        Some(limit) if universe.len() > limit => Err(Error::TooManyAtoms {
            count: universe.len(),
            limit,
        }
        .into()),
        _ => Ok(()),
    }
}

fn load(opts: &Options, path: &Path) -> Result<Program> {
    let p = Program::parse(&read_source(path)?)?;
    check_size(opts, p.universe())?;
    Ok(p)
}

fn load_cc(opts: &Options, path: &Path) -> Result<CcProgram> {
    let p = CcProgram::parse(&read_source(path)?)?;
    check_size(opts, p.universe())?;
    Ok(p)
}

fn set_json(u: &Universe, s: &AtomSet) -> Value {
    Value::from(u.set_names(s))
}

fn models_json(u: &Universe, models: &[Interpretation]) -> Value {
    Value::Array(models.iter().map(|m| set_json(u, m)).collect())
}

fn models_text(u: &Universe, models: &[Interpretation]) -> String {
    let sets: Vec<String> = models
        .iter()
        .map(|m| u.display_set(m).to_string())
        .collect();
    sets.join(" ")
}

fn export(theory: &Theory, path: Option<&Path>) -> Result<()> {
    if let Some(path) = path {
        let dimacs = theory.to_cnf().to_dimacs(&theory.universe);
        std::fs::write(path, dimacs)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Runs the requested methods and reports one model list, or every list
/// with an agreement flag for `both`.
fn report_models(
    universe: &Universe,
    method: Method,
    run: impl Fn(Method) -> Result<Vec<Interpretation>>,
) -> Result<Output> {
    if method != Method::Both {
        let models = run(method)?;
        let text: String = models
            .iter()
            .map(|m| format!("{}\n", universe.display_set(m)))
            .collect();
        return Ok(Output {
            json: json!({ "models": models_json(universe, &models) }),
            text,
        });
    }
    let mut methods = Map::new();
    let mut text = String::new();
    let mut results = Vec::new();
    for (name, m) in [
        ("bruteforce", Method::Bruteforce),
        ("equations", Method::Equations),
        ("schemes", Method::Schemes),
    ] {
        let models = run(m)?;
        methods.insert(name.to_string(), models_json(universe, &models));
        let _ = writeln!(text, "{name}: {}", models_text(universe, &models));
        results.push(models);
    }
    let agree = results.windows(2).all(|w| w[0] == w[1]);
    let _ = writeln!(text, "agree: {agree}");
    Ok(Output {
        json: json!({
            "models": models_json(universe, &results[0]),
            "methods": methods,
            "agree": agree,
        }),
        text,
    })
}

pub fn solve(
    opts: &Options,
    file: &Path,
    method: Method,
    reduction: Reduction,
    export_cnf: Option<&Path>,
) -> Result<Output> {
    let p = load(opts, file)?;
    let reduced = reduction.reduced();
    if export_cnf.is_some() {
        export(&theory(&p, reduced)?, export_cnf)?;
    }
    report_models(p.universe(), method, |m| {
        Ok(match m {
            Method::Bruteforce => stable_models_bruteforce(&p)?,
            Method::Schemes => stable_models_via_schemes(&p)?,
            _ => all_models_with_timeout(&theory(&p, reduced)?, opts.timeout)?,
        })
    })
}

fn parse_model(names: &str, universe: &Universe) -> Result<Interpretation> {
    names
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|n| {
            universe.lookup(n).ok_or_else(|| {
                Failure::from(Error::UnknownAtom {
                    name: n.to_string(),
                })
            })
        })
        .collect()
}

pub fn check(opts: &Options, file: &Path, model: &str) -> Result<Output> {
    let p = load(opts, file)?;
    let u = p.universe();
    let m = parse_model(model, u)?;
    let gl = gl_operator(&p, &m);
    let stable = is_stable_model(&p, &m);
    Ok(Output {
        json: json!({ "stable": stable, "gl": set_json(u, &gl) }),
        text: format!(
            "{}\ngl: {}\n",
            if stable { "stable" } else { "unstable" },
            u.display_set(&gl)
        ),
    })
}

pub fn reduct(opts: &Options, file: &Path, model: &str) -> Result<Output> {
    let p = load(opts, file)?;
    let m = parse_model(model, p.universe())?;
    let r = gl_reduct(&p, &m);
    let clauses: Vec<String> = r.clauses().iter().map(|c| r.clause_text(c)).collect();
    Ok(Output {
        json: json!({ "clauses": clauses }),
        text: r.to_string(),
    })
}

pub fn schemes(
    opts: &Options,
    file: &Path,
    atom: &str,
    max_steps: Option<usize>,
) -> Result<Output> {
    let p = load(opts, file)?;
    let target = p.atom(atom)?;
    let found = enumerate_schemes(&p, target, max_steps.unwrap_or(p.universe().len()));
    let mut text = String::new();
    for s in &found {
        let steps: Vec<String> = s
            .steps
            .iter()
            .map(|st| p.clause_text(&p.clauses()[st.clause]))
            .collect();
        let _ = writeln!(
            text,
            "{}  support {}",
            steps.join(" "),
            p.universe().display_set(&s.support)
        );
    }
    Ok(Output {
        json: json!({ "schemes": found.iter().map(|s| s.to_json(&p)).collect::<Vec<_>>() }),
        text,
    })
}

fn mode(reduction: Reduction) -> SupportMode {
    if reduction.reduced() {
        SupportMode::Minimal
    } else {
        SupportMode::All
    }
}

/// Restricts a per-atom JSON map and its text rendering to one atom.
fn per_atom_output(
    universe: &Universe,
    full: Value,
    line: impl Fn(schemata::Atom) -> String,
    atom: Option<schemata::Atom>,
) -> Output {
    let atoms: Vec<schemata::Atom> = match atom {
        Some(a) => vec![a],
        None => universe.atoms().collect(),
    };
    let json = match atom {
        Some(a) => {
            let name = universe.name(a);
            json!({ name: full[name].clone() })
        }
        None => full,
    };
    let text = atoms.iter().map(|&a| format!("{}\n", line(a))).collect();
    Output { json, text }
}

pub fn supports(
    opts: &Options,
    file: &Path,
    atom: Option<&str>,
    reduction: Reduction,
) -> Result<Output> {
    let p = load(opts, file)?;
    let atom = atom.map(|a| p.atom(a)).transpose()?;
    let family = SupportFamily::compute(&p, mode(reduction))?;
    let u = p.universe();
    Ok(per_atom_output(
        u,
        family.to_json(u),
        |a| {
            let sets: Vec<String> = family
                .of(a)
                .iter()
                .map(|s| u.display_set(s).to_string())
                .collect();
            format!(
                "{}: {}",
                u.name(a),
                if sets.is_empty() {
                    "none".into()
                } else {
                    sets.join(" ")
                }
            )
        },
        atom,
    ))
}

pub fn equations(
    opts: &Options,
    file: &Path,
    reduction: Reduction,
    export_cnf: Option<&Path>,
) -> Result<Output> {
    let p = load(opts, file)?;
    let eqs = defining_equations(&p, reduction.reduced())?;
    let lines: Vec<String> = eqs.iter().map(|e| e.to_text(p.universe())).collect();
    if export_cnf.is_some() {
        let formulas = eqs.iter().map(|e| e.formula()).collect();
        export(&Theory::new(p.universe().clone(), formulas), export_cnf)?;
    }
    Ok(lines_output(lines))
}

fn lines_output(lines: Vec<String>) -> Output {
    let text = lines.iter().map(|l| format!("{l}\n")).collect();
    Output {
        json: json!({ "equations": lines }),
        text,
    }
}

pub fn lab_realize(atoms: usize, exhaustive: bool, samples: usize, seed: u64) -> Result<Output> {
    let tables = if exhaustive {
        exhaustive_antimonotone_tables(atoms)?
    } else {
        let mut rng = StdRng::seed_from_u64(seed);
        (0..samples)
            .map(|_| random_antimonotone_table(atoms, &mut rng))
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    let failures: Vec<Value> = tables
        .iter()
        .filter_map(|t| {
            verify_operator_realization(t).map(|m| {
                let u = t.universe();
                json!({
                    "table": t.to_json(),
                    "at": set_json(u, &m.at),
                    "expected": set_json(u, &m.expected),
                    "actual": set_json(u, &m.actual),
                })
            })
        })
        .collect();
    let text = format!(
        "{} atoms, {} tables, {} realized, {} failures\n",
        atoms,
        tables.len(),
        tables.len() - failures.len(),
        failures.len()
    );
    Ok(Output {
        json: json!({
            "atoms": atoms,
            "exhaustive": exhaustive,
            "tables": tables.len(),
            "realized": tables.len() - failures.len(),
            "failures": failures,
        }),
        text,
    })
}

pub fn lab_fsp(family: &str, to: usize) -> Result<Output> {
    let family: ProgramFamily = family.parse().map_err(Failure::Usage)?;
    if to == 0 {
        return Err(Failure::Usage("--to must be at least 1".into()));
    }
    let probe = fsp_growth_probe(family, to)?;
    let mut text = String::new();
    for (n, c) in &probe.counts {
        let _ = writeln!(text, "n={n} supports={c}");
    }
    let _ = writeln!(text, "trend: {}", probe.trend.name());
    Ok(Output {
        json: probe.to_json(),
        text,
    })
}

pub fn lab_antimono(opts: &Options, file: &Path) -> Result<Output> {
    let p = load(opts, file)?;
    let table = gl_table(&p)?;
    let u = p.universe();
    Ok(match check_antimonotone(&table) {
        Ok(()) => Output {
            json: json!({ "antimonotone": true }),
            text: "antimonotone: true\n".into(),
        },
        Err(Error::NotAntimonotone { smaller, larger }) => Output {
            json: json!({
                "antimonotone": false,
                "witness": { "smaller": set_json(u, &smaller), "larger": set_json(u, &larger) },
            }),
            text: format!(
                "antimonotone: false\nwitness: {} {}\n",
                u.display_set(&smaller),
                u.display_set(&larger)
            ),
        },
        Err(e) => return Err(e.into()),
    })
}

pub fn cc_solve(
    opts: &Options,
    file: &Path,
    method: Method,
    reduction: Reduction,
    export_cnf: Option<&Path>,
) -> Result<Output> {
    let p = load_cc(opts, file)?;
    let reduced = reduction.reduced();
    if export_cnf.is_some() {
        export(&cc_theory(&p, reduced)?, export_cnf)?;
    }
    report_models(p.universe(), method, |m| {
        Ok(match m {
            Method::Bruteforce => cc_stable_models_bruteforce(&p)?,
            Method::Schemes => cc_stable_models_via_schemes(&p)?,
            _ => all_models_with_timeout(&cc_theory(&p, reduced)?, opts.timeout)?,
        })
    })
}

pub fn cc_reduct(opts: &Options, file: &Path, model: &str) -> Result<Output> {
    let p = load_cc(opts, file)?;
    let m = parse_model(model, p.universe())?;
    let r = nss_reduct(&p, &m);
    let clauses: Vec<String> = r.clauses.iter().map(|c| r.clause_text(c)).collect();
    Ok(Output {
        json: json!({ "clauses": clauses }),
        text: r.to_string(),
    })
}

pub fn cc_supports(
    opts: &Options,
    file: &Path,
    atom: Option<&str>,
    reduction: Reduction,
) -> Result<Output> {
    let p = load_cc(opts, file)?;
    let atom = atom.map(|a| p.atom(a)).transpose()?;
    let family = CcSupportFamily::compute(&p, mode(reduction))?;
    let u = p.universe();
    Ok(per_atom_output(
        u,
        family.to_json(u),
        |a| {
            let sets: Vec<String> = family
                .of(a)
                .iter()
                .map(|s| s.display(u).to_string())
                .collect();
            format!(
                "{}: {}",
                u.name(a),
                if sets.is_empty() {
                    "none".into()
                } else {
                    sets.join(" ")
                }
            )
        },
        atom,
    ))
}

pub fn cc_equations(opts: &Options, file: &Path, reduction: Reduction) -> Result<Output> {
    let p = load_cc(opts, file)?;
    Ok(lines_output(cc_theory(&p, reduction.reduced())?.lines()))
}
