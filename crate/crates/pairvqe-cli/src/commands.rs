use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::Utc;
use pairvqe::circuit::{self, build_ansatz, AnsatzSpec, Circuit};
use pairvqe::fermion::SpinLayout;
use pairvqe::molecule::{build_hcb_hamiltonian, build_qubit_hamiltonian, load_fixture, MolecularSystem};
use pairvqe::pauli::PauliSum;
use pairvqe::sim::{exact_spectrum, simulate, Observable};
use pairvqe::vqe::{self, InitialGuess, OptimizeConfig, OrbitalOptions, VqeResult};
use rayon::prelude::*;

use crate::error::CliError;
use crate::report::{OrbitalReport, RunReport, VariancePair};
use crate::{CircuitArgs, OptimizeArgs, OptimizerArgs, ScanArgs};

type Result<T> = std::result::Result<T, CliError>;

fn load(path: &Path) -> Result<MolecularSystem> {
    load_fixture(path).map(|(sys, _)| sys).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn spec_for(name: &str, args: &CircuitArgs) -> Result<AnsatzSpec> {
    Ok(AnsatzSpec::parse(name)?.with_arrangement(args.arrangement.into()).with_layout(args.layout.into()))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn resources(path: &Path, ansatz: &str, level: u8, json: bool, args: &CircuitArgs) -> Result<()> {
    let spec = spec_for(ansatz, args)?;
    let sys = load(path)?;
    let c = build_ansatz(&sys, &spec)?;
    let r = circuit::resources(&circuit::compile(&c, level)?)?;
    if json {
        let v = serde_json::json!({ "ansatz": spec.to_string(), "level": level, "resources": r });
        println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
    } else {
        println!("{:<16} {:>5} {:>8} {:>8} {:>7} {:>6}", "ansatz", "level", "n_qubits", "n_params", "n_cnot", "depth");
        println!("{:<16} {:>5} {:>8} {:>8} {:>7} {:>6}", spec.to_string(), level, r.n_qubits, r.n_params, r.n_cnot, r.depth);
    }
    Ok(())
}

pub fn compile(path: &Path, ansatz: &str, level: u8, out: Option<&Path>, args: &CircuitArgs) -> Result<()> {
    let spec = spec_for(ansatz, args)?;
    let sys = load(path)?;
    let c = circuit::compile(&build_ansatz(&sys, &spec)?, level)?;
    write_output(out, &circuit::write_circuit_text(&c)?)
}

fn config(o: &OptimizerArgs) -> OptimizeConfig {
    OptimizeConfig {
        initial: o.init.map(InitialGuess::Constant).unwrap_or_default(),
        grad_mode: o.grad.into(),
        tol_grad: o.tol_grad,
        max_iter: o.max_iter,
        n_starts: o.starts,
        seed: o.seed,
    }
}

fn fci_energy(sys: &MolecularSystem, layout: SpinLayout) -> Result<f64> {
    let h = build_qubit_hamiltonian(sys, layout);
    Ok(exact_spectrum(&h, sys.n_qubits(), Some(sys.n_electrons), false)?.ground_energy())
}

struct Run {
    sys: MolecularSystem,
    result: VqeResult,
    orbitals: Option<OrbitalReport>,
}

/// Angle optimization, or the alternating orbital loop with `--oo`.
fn run(sys: &MolecularSystem, spec: &AnsatzSpec, c: &Circuit, h: &PauliSum, o: &OptimizerArgs) -> Result<Run> {
    let cfg = config(o);
    let result = if o.oo {
        let out = vqe::optimize_orbitals(sys, spec, &cfg, &OrbitalOptions::default())?;
        let m = &out.orbitals;
        let coefficients = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        let orbitals = OrbitalReport { macro_energies: out.macro_energies, coefficients };
        return Ok(Run { sys: out.system, result: out.result, orbitals: Some(orbitals) });
    } else {
        vqe::minimize(c, h, &cfg)?
    };
    if !result.energy.is_finite() {
        return Err(CliError::Optimizer { msg: "energy is not finite".into(), params: result.values_for(c) });
    }
    Ok(Run { sys: sys.clone(), result, orbitals: None })
}

pub fn optimize(args: &OptimizeArgs) -> Result<()> {
    let started_at = Utc::now();
    let mut spec = spec_for(&args.ansatz, &args.circuit)?;
    if args.hcb {
        if args.optimizer.oo {
            return Err(CliError::Usage("--oo needs the JW register and cannot be combined with --hcb".into()));
        }
        spec.hcb = true;
        spec.validate()?;
    }
    if args.optimizer.oo && args.level.is_some() {
        return Err(CliError::Usage("--oo optimizes the excitation circuit; drop --level".into()));
    }
    let sys = load(&args.fcidump)?;
    let layout = spec.layout;
    let c = build_ansatz(&sys, &spec)?;
    let h = if spec.hcb { build_hcb_hamiltonian(&sys) } else { build_qubit_hamiltonian(&sys, layout) };
    let target = match args.level {
        Some(level) => circuit::compile(&c, level)?,
        None => c.clone(),
    };
    let resource_level = args.level.unwrap_or(if circuit::compile(&c, 2).is_ok() { 2 } else { 1 });
    let resources = circuit::resources(&circuit::compile(&c, resource_level)?)?;

    let Run { sys: final_sys, result, orbitals } = run(&sys, &spec, &target, &h, &args.optimizer)?;

    let fci = if args.fci { Some(fci_energy(&sys, layout)?) } else { None };
    let variance = if args.variance {
        // measured on the JW register, where the HCB circuit has an equivalent twin
        let jw_spec = AnsatzSpec { hcb: false, ..spec.clone() };
        let jw = build_ansatz(&final_sys, &jw_spec)?;
        let obs = Observable::new(build_qubit_hamiltonian(&final_sys, layout));
        let hf = simulate(&jw, &vec![0.0; jw.n_parameters()])?;
        let opt = simulate(&jw, &result.values_for(&jw))?;
        Some(VariancePair { hf: obs.variance(&hf)?, optimized: obs.variance(&opt)? })
    } else {
        None
    };

    let report = RunReport {
        tool: "pairvqe".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: args.fcidump.display().to_string(),
        ansatz: spec.to_string(),
        encoding: if spec.hcb { "hcb" } else { "jw" }.into(),
        layout: layout.name().into(),
        arrangement: format!("{:?}", spec.arrangement).to_lowercase(),
        n_orbitals: sys.n_orbitals,
        n_electrons: sys.n_electrons,
        n_qubits: c.n_qubits,
        seed: args.optimizer.seed,
        n_starts: args.optimizer.starts,
        gradient: args.optimizer.grad.into(),
        resource_level,
        resources,
        optimized_level: args.level,
        reference_energy: sys.reference_energy(),
        result,
        fci_energy: fci,
        variance,
        orbital_optimization: orbitals,
        started_at,
        finished_at: Utc::now(),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    write_output(args.out.as_deref(), &text)
}

fn geometry_tag(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    name.strip_suffix(".fcidump").unwrap_or(&name).to_string()
}

struct ScanRow {
    geometry: String,
    method: String,
    energy: f64,
    fci: Option<f64>,
}

fn scan_one(path: &Path, specs: &[AnsatzSpec], args: &ScanArgs) -> Result<Vec<ScanRow>> {
    let sys = load(path)?;
    let tag = geometry_tag(path);
    let fci = if args.fci { Some(fci_energy(&sys, args.circuit.layout.into())?) } else { None };
    let mut rows = Vec::new();
    for spec in specs {
        let c = build_ansatz(&sys, spec)?;
        let h = build_qubit_hamiltonian(&sys, spec.layout);
        let r = run(&sys, spec, &c, &h, &args.optimizer)?;
        rows.push(ScanRow { geometry: tag.clone(), method: spec.to_string(), energy: r.result.energy, fci });
    }
    if let Some(e) = fci {
        rows.push(ScanRow { geometry: tag, method: "FCI".into(), energy: e, fci });
    }
    Ok(rows)
}

pub fn scan(args: &ScanArgs) -> Result<()> {
    let specs = args.ansatz.iter().map(|a| spec_for(a, &args.circuit)).collect::<Result<Vec<_>>>()?;
    let paths: Vec<PathBuf> = glob::glob(&args.pattern)
        .map_err(|e| CliError::Usage(format!("bad pattern `{}`: {e}", args.pattern)))?
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    if paths.is_empty() {
        return Err(CliError::Input(format!("no files match `{}`", args.pattern)));
    }
    let per_file: Vec<Result<Vec<ScanRow>>> = paths.par_iter().map(|p| scan_one(p, &specs, args)).collect();
    let mut rows = Vec::new();
    for r in per_file {
        rows.extend(r?);
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let write_err = |e: csv::Error| CliError::Input(e.to_string());
    if args.fci {
        w.write_record(["geometry", "method", "energy", "fci"]).map_err(write_err)?;
    } else {
        w.write_record(["geometry", "method", "energy"]).map_err(write_err)?;
    }
    for r in &rows {
        let mut rec = vec![r.geometry.clone(), r.method.clone(), format!("{:.12}", r.energy)];
        if let Some(f) = r.fci {
            rec.push(format!("{f:.12}"));
        }
        w.write_record(&rec).map_err(write_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    write_output(args.out.as_deref(), &String::from_utf8(bytes).expect("utf-8"))?;

    if args.npe {
        eprintln!("method,npe");
        for spec in &specs {
            let name = spec.to_string();
            let errs: Vec<f64> =
                rows.iter().filter(|r| r.method == name).filter_map(|r| r.fci.map(|f| r.energy - f)).collect();
            let max = errs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = errs.iter().copied().fold(f64::INFINITY, f64::min);
            eprintln!("{name},{:.12}", max - min);
        }
    }
    Ok(())
}
