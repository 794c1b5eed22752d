use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use dh_core::density::{reconstruct_density, DensityMatrix};
use dh_core::oracle::{self, conditional_state, max_deviation, reduced_density, DenseState, TOL};
use dh_core::protocols::{
    dependency_trace_circuit, run_entanglement_swap, run_generalized_measurement_demo, run_ultimate_chain_demo,
    swap_circuit,
};
use dh_core::uniqueness::{construct_from_density, generate_equivalent_sets, validate_basis, Construction};
use dh_core::verify::{case_rng, check_circuit};
use dh_core::{evolve_circuit, parse_circuit, Circuit, DescriptorSet, Gate, GateKind, PauliSum, Step};

use crate::report::{Report, Section, Verification};

/// Bad input: exit code 1.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

pub struct Ctx {
    pub seed: u64,
    pub verify: bool,
    pub max_qubits: usize,
}

/// Exhaustive table comparison up to this many qubits, sampled above.
const FULL_TABLE_QUBITS: usize = 5;

pub fn load_circuit(path: &Path, ctx: &Ctx) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let circuit = parse_circuit(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    check_size(circuit.final_qubits(), ctx)?;
    Ok(circuit)
}

fn check_size(n: usize, ctx: &Ctx) -> Result<()> {
    if n > ctx.max_qubits {
        return Err(usage(format!("register of {n} qubits exceeds DH_MAX_QUBITS = {}", ctx.max_qubits)));
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report data serializes")
}

fn lines(s: &str) -> Vec<String> {
    s.lines().map(str::to_string).collect()
}

fn table_section(set: &DescriptorSet, circuit: &Circuit, ctx: &Ctx) -> Result<Section> {
    let n = set.num_qubits();
    let samples = if n <= FULL_TABLE_QUBITS { 1 << (2 * n) } else { 200 };
    let case = check_circuit(&mut case_rng(ctx.seed, 0), circuit, samples)?;
    Ok(Section::within(case.max_deviation, TOL, format!("{} expectation values against the dense state", case.samples)))
}

fn density_section(rho: &DensityMatrix, state: &DenseState, qubits: &[usize]) -> Section {
    let dev = max_deviation(&rho.dense(), &reduced_density(state, qubits));
    let labels: Vec<String> = qubits.iter().map(|q| (q + 1).to_string()).collect();
    Section::within(dev, TOL, format!("density of qubits {{{}}} against the partial trace", labels.join(",")))
}

fn descriptor_rows(set: &DescriptorSet) -> Value {
    let rows: Vec<Value> = set
        .descriptors()
        .iter()
        .enumerate()
        .map(|(a, d)| {
            let [x, y, z] = d.components();
            let averages: Vec<Value> = [x, y, z].iter().map(|c| to_value(&c.vacuum_expectation().re)).collect();
            json!({
                "qubit": a + 1,
                "x": x.canonical(),
                "y": y.canonical(),
                "z": z.canonical(),
                "averages": averages,
                "support": d.support().iter().map(|q| q + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(rows)
}

/// Densities are reported for the whole register up to this size.
const DENSITY_QUBITS: usize = 4;

pub fn run(path: &Path, ctx: &Ctx) -> Result<Report> {
    let circuit = load_circuit(path, ctx)?;
    let set = evolve_circuit(&circuit)?;
    let n = set.num_qubits();
    let all: Vec<usize> = (0..n).collect();
    let density = if n <= DENSITY_QUBITS { Some(reconstruct_density(&set, &all)?) } else { None };
    let verification = if ctx.verify {
        let state = DenseState::evolve(&circuit);
        let mut sections = vec![("expectations", table_section(&set, &circuit, ctx)?)];
        if let Some(rho) = &density {
            sections.push(("density", density_section(rho, &state, &all)));
        }
        Some(Verification::new(sections))
    } else {
        None
    };
    Ok(Report {
        command: "run",
        seed: ctx.seed,
        display: lines(&set.render()),
        data: json!({
            "circuit": to_value(&circuit),
            "qubits": n,
            "descriptors": descriptor_rows(&set),
            "density": density.as_ref().map(to_value),
        }),
        verification,
    })
}

pub fn validate(path: &Path, ctx: &Ctx) -> Result<Report> {
    let circuit = load_circuit(path, ctx)?;
    let set = evolve_circuit(&circuit)?;
    if set.num_qubits() > 3 {
        return Err(usage(format!("validate supports at most 3 qubits, found {}", set.num_qubits())));
    }
    let report = validate_basis(&set)?;
    let mut display = lines(&set.render());
    display.push(format!(
        "independent products: {} of {}; well formed: {}",
        report.independent_count,
        1usize << (2 * set.num_qubits()),
        report.well_formed
    ));
    display.extend(report.violations.iter().map(|v| format!("violation: {v}")));
    let verification = if ctx.verify {
        Some(Verification::new([("expectations", table_section(&set, &circuit, ctx)?)]))
    } else {
        None
    };
    Ok(Report {
        command: "validate",
        seed: ctx.seed,
        display,
        data: json!({ "descriptors": descriptor_rows(&set), "basis": to_value(&report) }),
        verification,
    })
}

fn bell_circuit() -> Circuit {
    Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)])
}

pub fn symmetries(path: Option<&Path>, ctx: &Ctx) -> Result<Report> {
    let circuit = match path {
        Some(p) => load_circuit(p, ctx)?,
        None => bell_circuit(),
    };
    let seed_set = evolve_circuit(&circuit)?;
    if seed_set.num_qubits() != 2 {
        return Err(usage(format!("symmetries needs a 2-qubit circuit, found {}", seed_set.num_qubits())));
    }
    let rho = reconstruct_density(&seed_set, &[0, 1])?;
    let transforms = dh_core::uniqueness::density_symmetries(&rho)?;
    let eq = generate_equivalent_sets(&seed_set, &rho)?;
    let mut display = vec![format!(
        "{} symmetries, {} exact sets, {} distinct sets (sign variants merged)",
        eq.transforms,
        eq.exact_sets,
        eq.classes.len()
    )];
    for (k, c) in eq.classes.iter().enumerate() {
        display.push(format!("set {} via {} ({} sign variants)", k + 1, c.transform, c.variants));
        display.extend(c.representative.render().lines().map(|l| format!("  {l}")));
    }
    let classes: Vec<Value> = eq
        .classes
        .iter()
        .map(|c| {
            json!({
                "transform": c.transform.cycles(),
                "variants": c.variants,
                "descriptors": descriptor_rows(&c.representative),
            })
        })
        .collect();
    let verification = if ctx.verify {
        let state = DenseState::evolve(&circuit);
        let dense = reduced_density(&state, &[0, 1]);
        let mut worst = 0.0f64;
        for s in eq.sets() {
            worst = worst.max(max_deviation(&reconstruct_density(s, &[0, 1])?.dense(), &dense));
        }
        Some(Verification::new([
            ("seed", table_section(&seed_set, &circuit, ctx)?),
            ("sets", Section::within(worst, TOL, "every set's density against the dense state")),
        ]))
    } else {
        None
    };
    Ok(Report {
        command: "symmetries",
        seed: ctx.seed,
        display,
        data: json!({
            "density": to_value(&rho),
            "transforms": transforms.iter().map(|t| t.cycles()).collect::<Vec<_>>(),
            "exact_sets": eq.exact_sets,
            "distinct_sets": eq.classes.len(),
            "all_well_formed": eq.all_well_formed,
            "all_tables_match": eq.all_tables_match,
            "sets": classes,
        }),
        verification,
    })
}

pub struct ConstructArgs<'a> {
    pub input: Option<&'a Path>,
    pub keep: Vec<usize>,
    pub maximally_mixed: Option<usize>,
    pub ancillas: usize,
    pub budget: u64,
}

pub fn construct(args: &ConstructArgs<'_>, ctx: &Ctx) -> Result<Report> {
    let rho = match (args.input, args.maximally_mixed) {
        (Some(_), Some(_)) => return Err(usage("give either a circuit file or --maximally-mixed, not both")),
        (None, None) => return Err(usage("construct needs a circuit file or --maximally-mixed N")),
        (None, Some(k)) => DensityMatrix::maximally_mixed(k)?,
        (Some(p), None) => {
            let set = evolve_circuit(&load_circuit(p, ctx)?)?;
            let keep: Vec<usize> =
                if args.keep.is_empty() { (0..set.num_qubits()).collect() } else { args.keep.clone() };
            if let Some(&q) = keep.iter().find(|&&q| q >= set.num_qubits()) {
                return Err(usage(format!("--keep label {} out of range", q + 1)));
            }
            reconstruct_density(&set, &keep)?
        }
    };
    check_size(rho.num_qubits() + args.ancillas, ctx)?;
    let result = construct_from_density(&rho, args.ancillas, args.budget).map_err(|e| match e {
        dh_core::Error::UnsupportedSize { .. } => usage(e.to_string()),
        other => other.into(),
    })?;
    let (display, found, verification) = match &result {
        Construction::Found(set) => {
            let sys: Vec<usize> = (0..rho.num_qubits()).collect();
            let matches = reconstruct_density(set, &sys)? == rho;
            let v = Verification::new([
                ("table", Section::exact(matches, "system density of the found set equals the target exactly")),
                ("basis", Section::exact(validate_basis(set)?.well_formed, "found set is a well-formed basis")),
            ]);
            (lines(&set.render()), Some(descriptor_rows(set)), v)
        }
        Construction::NotFound => (
            vec![format!("no set on {} qubits reproduces the target", rho.num_qubits() + args.ancillas)],
            None,
            Verification::new([("table", Section::exact(true, "nothing to check"))]),
        ),
    };
    Ok(Report {
        command: "construct",
        seed: ctx.seed,
        display,
        data: json!({
            "target": to_value(&rho),
            "ancillas": args.ancillas,
            "found": found.is_some(),
            "descriptors": found,
        }),
        verification: ctx.verify.then_some(verification),
    })
}

pub fn swap_demo(ctx: &Ctx) -> Result<Report> {
    let r = run_entanglement_swap()?;
    let mut display = vec!["final descriptors:".to_string()];
    display.extend(r.final_set.render().lines().map(|l| format!("  {l}")));
    display.push("supports:".into());
    for (q, s) in &r.dependency.per_qubit {
        let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        display.push(format!("  q{q}: {{{}}}", s.join(",")));
    }
    display.push("pairs:".into());
    for p in &r.pair_densities {
        display.push(format!(
            "  ({},{}): purity sum {}, uncorrelated {}",
            p.pair.0, p.pair.1, p.purity.sum, p.uncorrelated
        ));
    }
    display.push("relative to (5,6):".into());
    for b in &r.relative_bell {
        display.push(format!(
            "  {}: p = {}, q'1 = {}, q'4 = {}, signs ({:+},{:+}), (1,4) {:?}, (2,3) {:?}",
            b.outcome,
            b.probability,
            b.reduced.descriptor(0),
            b.reduced.descriptor(1),
            b.sign_1,
            b.sign_4,
            b.bell,
            b.partner_bell
        ));
    }
    let verification = if ctx.verify {
        let circuit = swap_circuit();
        let state = DenseState::evolve(&circuit);
        let mut pair_dev = 0.0f64;
        for p in &r.pair_densities {
            pair_dev = pair_dev
                .max(max_deviation(&p.density.dense(), &reduced_density(&state, &[p.pair.0 - 1, p.pair.1 - 1])));
        }
        let mut cond_dev = 0.0f64;
        for b in &r.relative_bell {
            let bits: Vec<u8> = b.outcome.bytes().map(|c| c - b'0').collect();
            let (rest, _) = conditional_state(&state, &[4, 5], &bits)?;
            cond_dev = cond_dev.max(max_deviation(&b.density.dense(), &reduced_density(&rest, &[0, 3])));
        }
        Some(Verification::new([
            ("expectations", table_section(&r.final_set, &circuit, ctx)?),
            ("pair_densities", Section::within(pair_dev, TOL, "pair densities against partial traces")),
            ("conditioned_pairs", Section::within(cond_dev, TOL, "conditioned (1,4) states against projected states")),
            ("locality", Section::exact(r.dependency.locality_ok, "support growth is local at every step")),
        ]))
    } else {
        None
    };
    Ok(Report { command: "swap-demo", seed: ctx.seed, display, data: to_value(&r), verification })
}

fn parse_prep(list: &str) -> Result<Vec<Gate>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| match GateKind::from_name(name) {
            Some(k) if k.arity() == 1 => Ok(Gate::new(k, vec![0])?),
            _ => Err(usage(format!("--prep: `{name}` is not a single-qubit gate"))),
        })
        .collect()
}

fn deviation_against(set: &DescriptorSet, circuit: &Circuit) -> Result<f64> {
    let state = DenseState::evolve(circuit);
    Ok(dh_core::verify::oracle_deviation(set, &state, &oracle::all_letter_sequences(set.num_qubits()))?)
}

pub fn measure_demo(prep: &str, ctx: &Ctx) -> Result<Report> {
    let preparation = parse_prep(prep)?;
    let demo = run_generalized_measurement_demo(&preparation)?;
    let mut display = vec![format!("system: q1 = {}", demo.system), "after the Bell-basis rotation:".into()];
    display.extend(demo.rotated.render().lines().map(|l| format!("  {l}")));
    display.push(format!("expected shape holds: {}", demo.shape_holds));
    display.push("after the two-qubit ancilla:".into());
    display.extend(demo.measured.render().lines().map(|l| format!("  {l}")));
    display.push(format!("x,y averages zero: {}; z averages kept: {}", demo.xy_zero, demo.z_preserved));
    let verification = if ctx.verify {
        let mut steps: Vec<Step> = preparation.iter().cloned().map(Step::Gate).collect();
        steps.extend([Step::AddAncilla, Step::Gate(Gate::h(0)), Step::Gate(Gate::cnot(0, 1))]);
        let rotated_circuit = Circuit::new(1, steps.clone());
        steps.extend([Step::AddAncilla, Step::AddAncilla, Step::Gate(Gate::cnot(0, 2)), Step::Gate(Gate::cnot(1, 3))]);
        let measured_circuit = Circuit::new(1, steps);
        let deco = Circuit::new(
            2,
            vec![
                Step::Gate(Gate::h(0)),
                Step::Gate(Gate::cnot(0, 1)),
                Step::AddAncilla,
                Step::Gate(Gate::cnot(0, 2)),
                Step::AddAncilla,
                Step::Gate(Gate::cnot(1, 3)),
            ],
        );
        let deco_state = DenseState::evolve(&deco);
        Some(Verification::new([
            (
                "rotated",
                Section::within(deviation_against(&demo.rotated, &rotated_circuit)?, TOL, "full expectation table"),
            ),
            (
                "measured",
                Section::within(deviation_against(&demo.measured, &measured_circuit)?, TOL, "full expectation table"),
            ),
            ("decoherence", density_section(&demo.decoherence.after, &deco_state, &[0, 1])),
        ]))
    } else {
        None
    };
    let mut data = to_value(&demo);
    data["preparation"] = json!(preparation.iter().map(|g| g.kind().name()).collect::<Vec<_>>());
    Ok(Report { command: "measure-demo", seed: ctx.seed, display, data, verification })
}

pub fn chain_demo(ctx: &Ctx) -> Result<Report> {
    let c = run_ultimate_chain_demo()?;
    let mut display = vec!["system measured by an ancilla:".to_string()];
    display.extend(c.measured.render().lines().map(|l| format!("  {l}")));
    display.push(format!("q1 relative to |0> of qubit 2: {}", c.relative_zero));
    display.push(format!("q1 relative to |1> of qubit 2: {}", c.relative_one));
    display.push("ancilla measured by a third qubit:".into());
    display.extend(c.chained.render().lines().map(|l| format!("  {l}")));
    display.push(format!("q2 relative to |0> of qubit 3: {}", c.plus));
    display.push(format!("q2 relative to |1> of qubit 3: {}", c.minus));
    let verification = if ctx.verify {
        let measured_circuit =
            Circuit::new(1, vec![Step::Gate(Gate::h(0)), Step::AddAncilla, Step::Gate(Gate::cnot(0, 1))]);
        let mut chained_steps = measured_circuit.steps().to_vec();
        chained_steps.extend([Step::AddAncilla, Step::Gate(Gate::cnot(1, 2))]);
        let chained_circuit = Circuit::new(1, chained_steps);
        // ⟨q'_1i⟩ = 2 Tr(ρ σ_i ⊗ |b⟩⟨b|) for a projector context.
        let state = DenseState::evolve(&measured_circuit);
        let mut worst = 0.0f64;
        for (bit, rel) in [(0u8, &c.relative_zero), (1, &c.relative_one)] {
            let (rest, p) = conditional_state(&state, &[1], &[bit])?;
            for (k, comp) in rel.components().iter().enumerate() {
                let sigma = PauliSum::single(1, 0, dh_core::PauliLetter::NON_IDENTITY[k]);
                let dense = oracle::expectation_dense(&rest, &sigma)?.re * 2.0 * p;
                worst = worst.max((comp.vacuum_expectation().re.to_f64() - dense).abs());
            }
        }
        Some(Verification::new([
            (
                "measured",
                Section::within(deviation_against(&c.measured, &measured_circuit)?, TOL, "full expectation table"),
            ),
            (
                "chained",
                Section::within(deviation_against(&c.chained, &chained_circuit)?, TOL, "full expectation table"),
            ),
            ("relative", Section::within(worst, TOL, "relative averages against projected states")),
        ]))
    } else {
        None
    };
    Ok(Report { command: "chain-demo", seed: ctx.seed, display, data: to_value(&c), verification })
}

pub fn trace(path: &Path, ctx: &Ctx) -> Result<Report> {
    let circuit = load_circuit(path, ctx)?;
    let report = dependency_trace_circuit(&circuit).context("tracing supports")?;
    let mut display = Vec::new();
    for (k, s) in report.per_step.iter().enumerate() {
        let cells: Vec<String> = s
            .supports
            .iter()
            .map(|(q, sup)| format!("q{q}{{{}}}", sup.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        display.push(format!("{:>3} {:<10} {}", k + 1, s.step, cells.join(" ")));
    }
    display.extend(report.violations.iter().map(|v| format!("violation: {v}")));
    let verification = if ctx.verify {
        let set = evolve_circuit(&circuit)?;
        Some(Verification::new([
            ("expectations", table_section(&set, &circuit, ctx)?),
            ("locality", Section::exact(report.locality_ok, "support growth is local at every step")),
        ]))
    } else {
        None
    };
    Ok(Report { command: "trace", seed: ctx.seed, display, data: to_value(&report), verification })
}
