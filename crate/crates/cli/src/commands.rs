use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use forge_core::algebra::{Constant, FieldElem, FieldSpec, Integers, Ring};
use forge_core::equation::{build_equation_ff, build_equation_int, EquationFF, EquationInt, VerdictFF, VerdictInt};
use forge_core::hitting::{
    circuit_grid_bound, circuit_hs_bound, default_constants, definable_grid_bound, definable_hs_bound, enumerate_class,
    ff_grid, greedy_hitting_set, int_grid, random_hitting_set, ClassParams, HittingSet, PolyClass,
};
use forge_core::io::{
    from_json, to_canonical_json, ClassFile, CoeffVectorFile, EquationManifest, HittingSetFile, WitnessFile,
};
use forge_core::kernel::{eval_matrix_ff, kernel_basis_ff, sample_kernel, siegel_search};
use forge_core::poly::CoeffVector;
use forge_core::{Budget, Error};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::record::{digests, manifest_path, sha256_file, ExperimentManifest, Record};
use crate::{
    ClassArgs, Cli, Command, EqBuildArgs, EqCommand, HsBuildArgs, HsCommand, Mode, ReplayArgs, Strategy, VerifyArgs,
    VnpCommand, VnpDemoArgs, WitnessArgs,
};

/// Exit code 1 means the run completed and refuted something; 2 means the
/// input was unusable.
#[derive(Debug)]
pub enum CliError {
    Falsified(String),
    Invalid(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Falsified(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Falsified(m) => write!(f, "falsified: {m}"),
            CliError::Invalid(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::GridInsufficient { .. }
            | Error::NotHitting { .. }
            | Error::WitnessNotFound { .. }
            | Error::EmptyKernel => CliError::Falsified(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// Runs `cli` inside a pool of `--threads` workers and, when `record` is set,
/// writes the experiment manifest next to the primary output.
pub fn run(cli: &Cli, args: &[String], budget: &Budget, record: bool) -> Res<()> {
    if let Command::Replay(r) = &cli.command {
        return replay(r, cli.threads, budget);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    let start = Instant::now();
    let mut rec = Record::default();
    let result = pool.install(|| dispatch(&cli.command, budget, &mut rec));
    let verdict = match &result {
        Ok(()) => rec.verdict.clone(),
        Err(CliError::Falsified(m)) => format!("falsified: {m}"),
        Err(CliError::Invalid(_)) => return result,
    };
    if record && !rec.outputs.is_empty() {
        let manifest = ExperimentManifest {
            version: env!("CARGO_PKG_VERSION").into(),
            command: rec.command.clone(),
            args: args.to_vec(),
            seed: rec.seed,
            threads: cli.threads,
            inputs: digests(&rec.inputs)?,
            outputs: digests(&rec.outputs)?,
            elapsed_ms: start.elapsed().as_millis() as u64,
            verdict,
        };
        let path = manifest_path(&rec.outputs[0]);
        std::fs::write(&path, to_canonical_json(&manifest)).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    result
}

fn dispatch(command: &Command, budget: &Budget, rec: &mut Record) -> Res<()> {
    match command {
        Command::Class(a) => class(a, budget, rec),
        Command::Hs(HsCommand::Build(a)) => hs_build(a, budget, rec),
        Command::Eq(EqCommand::BuildFf(a)) => eq_build(a, Mode::Ff, budget, rec),
        Command::Eq(EqCommand::BuildInt(a)) => eq_build(a, Mode::Int, budget, rec),
        Command::Eq(EqCommand::Verify(a)) | Command::Verify(a) => verify(a, budget, rec),
        Command::Witness(a) => witness(a, budget, rec),
        Command::Vnp(VnpCommand::Demo(a)) => vnp_demo(a, budget),
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    }
}

fn parse_constants(text: &str) -> Res<Vec<Constant>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<BigInt>().map(Constant::Int).map_err(|_| invalid(format!("bad constant {s:?}"))))
        .collect()
}

fn class(a: &ClassArgs, budget: &Budget, rec: &mut Record) -> Res<()> {
    rec.command = "class".into();
    let mut params = ClassParams::new(a.n, a.d, a.s, Vec::new());
    params.m = a.m;
    params.delta = a.delta;
    let text = match a.mode {
        Mode::Ff => {
            if a.delta {
                return Err(invalid("--delta applies to integer classes"));
            }
            let f = FieldSpec::new_bounded(a.p, a.r, budget.field_size)?;
            params.constants = match &a.constants {
                Some(c) => parse_constants(c)?,
                None => default_constants(&f),
            };
            let class = enumerate_class(&f, &params, budget)?;
            rec.verdict = format!("{} members", class.len());
            to_canonical_json(&ClassFile::new(&f, &class))
        }
        Mode::Int => {
            params.constants = match &a.constants {
                Some(c) => parse_constants(c)?,
                None => default_constants(&Integers),
            };
            let class = enumerate_class(&Integers, &params, budget)?;
            rec.verdict = format!("{} members", class.len());
            to_canonical_json(&ClassFile::new(&Integers, &class))
        }
    };
    rec.write(&a.out, &text)?;
    println!("class: {}", rec.verdict);
    Ok(())
}

/// Least `R` with `p^R >= d²`.
fn default_ext_degree(p: u32, d: u32) -> u32 {
    let needed = u64::from(d) * u64::from(d);
    let mut r = 1;
    while u64::from(p).pow(r) < needed {
        r += 1;
    }
    r
}

fn hs_bound(params: &ClassParams) -> u64 {
    if params.m > 0 {
        definable_hs_bound(params.s as u64)
    } else {
        circuit_hs_bound(params.n as u64, params.s as u64)
    }
}

/// Greedy or random selection; an insufficient grid reports the member that
/// vanishes everywhere.
fn select<R: Ring>(
    ring: &R,
    coeff_ring: &impl Ring<Elem = R::Elem>,
    class: &PolyClass<R::Elem>,
    grid: &[Vec<R::Elem>],
    grid_bound: Option<u64>,
    a: &HsBuildArgs,
) -> Res<HittingSet<R>> {
    let result = match a.strategy {
        Strategy::Greedy => greedy_hitting_set(ring, class, grid, grid_bound),
        Strategy::Random => {
            let t = a.t.unwrap_or_else(|| (hs_bound(&class.params) as usize).min(grid.len()));
            random_hitting_set(ring, class, grid, grid_bound, t, a.seed)
        }
    };
    result.map_err(|e| {
        if let Error::GridInsufficient { member } | Error::NotHitting { member } = e {
            eprintln!(
                "counterexample:\n{}",
                to_canonical_json(&CoeffVectorFile::new(coeff_ring, &class.members[member]))
            );
        }
        e.into()
    })
}

fn hs_build(a: &HsBuildArgs, budget: &Budget, rec: &mut Record) -> Res<()> {
    rec.command = "hs build".into();
    if a.strategy == Strategy::Random {
        rec.seed = Some(a.seed);
    }
    let file: ClassFile = from_json(&rec.read(&a.class)?)?;
    let params = file.params()?;
    let bound = hs_bound(&params);
    let text = match file.carrier.clone() {
        forge_core::algebra::Carrier::Field(base) => {
            if base.r() != 1 {
                return Err(invalid("hitting sets over a field need a prime coefficient field"));
            }
            let r = a.ext_r.unwrap_or_else(|| default_ext_degree(base.p(), params.d));
            let k = FieldSpec::new_bounded(base.p(), r, budget.field_size)?;
            let class = file.decode(&base)?;
            let grid = ff_grid(&k, params.n, budget)?;
            let hs = select(&k, &base, &class, &grid, None, a)?;
            println!("|H| = {} over GF({}^{r}) (size bound {bound})", hs.len(), base.p());
            to_canonical_json(&HittingSetFile::new(&hs))
        }
        forge_core::algebra::Carrier::Int => {
            let grid_bound = a.bound.unwrap_or_else(|| {
                let (d, s) = (u64::from(params.d), params.s as u64);
                if params.m > 0 {
                    definable_grid_bound(d, s, params.constants.len() as u64)
                } else {
                    circuit_grid_bound(s, d)
                }
            });
            let class = file.decode(&Integers)?;
            let grid = int_grid(grid_bound, params.n, budget)?;
            let hs = select(&Integers, &Integers, &class, &grid, Some(grid_bound), a)?;
            println!("|H| = {} in [{grid_bound}]^{} (size bound {bound})", hs.len(), params.n);
            to_canonical_json(&HittingSetFile::new(&hs))
        }
    };
    rec.verdict = "hitting".into();
    rec.write(&a.out, &text)
}

/// How `target` is referred to from a file written at `from`: the bare file
/// name when both share a directory, otherwise an absolute path.
fn reference(target: &Path, from: &Path) -> String {
    let dir = |p: &Path| std::path::absolute(p).ok().and_then(|p| p.parent().map(Path::to_path_buf));
    match (dir(target), dir(from), target.file_name()) {
        (Some(a), Some(b), Some(name)) if a == b => name.to_string_lossy().into_owned(),
        _ => std::path::absolute(target).unwrap_or_else(|_| target.to_path_buf()).display().to_string(),
    }
}

fn resolve(reference: &str, from: &Path) -> PathBuf {
    let p = PathBuf::from(reference);
    if p.is_absolute() {
        p
    } else {
        from.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn eq_build(a: &EqBuildArgs, mode: Mode, budget: &Budget, rec: &mut Record) -> Res<()> {
    rec.command = match mode {
        Mode::Ff => "eq build-ff",
        Mode::Int => "eq build-int",
    }
    .into();
    let file: HittingSetFile = from_json(&rec.read(&a.hs)?)?;
    let expected = if mode == Mode::Ff { "ff" } else { "int" };
    if file.mode != expected {
        return Err(invalid(format!("hitting set is in {} mode, expected {expected}", file.mode)));
    }
    let hs_ref = reference(&a.hs, &a.out);
    let (mut manifest, circuit) = match mode {
        Mode::Ff => {
            let hs = file.decode_ff()?;
            let base = FieldSpec::prime(hs.ring().p())?;
            let eq = build_equation_ff(&base, hs)?;
            let circuit = a.circuit.as_ref().map(|_| eq.compile()).transpose()?;
            (EquationManifest::for_ff(&eq, &hs_ref), circuit)
        }
        Mode::Int => {
            let eq = build_equation_int(file.decode_int()?, budget)?;
            let circuit = a.circuit.as_ref().map(|_| eq.compile(a.max_factors)).transpose()?;
            (EquationManifest::for_int(&eq, &hs_ref), circuit)
        }
    };
    if let (Some(path), Some(c)) = (&a.circuit, &circuit) {
        manifest.circuit = Some(reference(path, &a.out));
        manifest.circuit_gates = Some(c.size());
    }
    println!(
        "N = {}, {} linear factors, degree bound {}",
        manifest.arity, manifest.factor_count, manifest.degree_bound
    );
    rec.verdict = "built".into();
    rec.write(&a.out, &to_canonical_json(&manifest))?;
    if let (Some(path), Some(c)) = (&a.circuit, &circuit) {
        rec.write(path, &c.to_json())?;
        println!("circuit: {} gates", c.size());
    }
    Ok(())
}

fn witness(a: &WitnessArgs, budget: &Budget, rec: &mut Record) -> Res<()> {
    rec.command = "witness".into();
    let file: HittingSetFile = from_json(&rec.read(&a.hs)?)?;
    let hs_ref = reference(&a.hs, &a.out);
    let out = match file.mode.as_str() {
        "ff" => {
            rec.seed = Some(a.seed);
            let hs = file.decode_ff()?;
            let base = FieldSpec::prime(hs.ring().p())?;
            let basis = kernel_basis_ff(&eval_matrix_ff(&hs, budget)?);
            let g = sample_kernel(&base, &basis, a.seed)?;
            println!("kernel dimension {}, sample has {} nonzero coefficients", basis.len(), g.nnz());
            WitnessFile {
                source: "kernel".into(),
                hitting_set: hs_ref,
                seed: Some(a.seed),
                pigeonhole: None,
                vector: CoeffVectorFile::new(&base, &g),
            }
        }
        _ => {
            let hs = file.decode_int()?;
            let w = siegel_search(&hs, budget)?;
            println!("Siegel witness with {} nonzero coefficients (pigeonhole {})", w.h.nnz(), w.pigeonhole);
            WitnessFile {
                source: "siegel".into(),
                hitting_set: hs_ref,
                seed: None,
                pigeonhole: Some(w.pigeonhole),
                vector: CoeffVectorFile::new(&Integers, &w.h),
            }
        }
    };
    rec.verdict = "found".into();
    rec.write(&a.out, &to_canonical_json(&out))
}

/// First class member on which the equation does not vanish, and the report
/// entry of each witness.
trait Checker {
    type Elem;
    fn useful_on(&self, v: &CoeffVector<Self::Elem>) -> Res<bool>;
    fn witness_entry(&self, v: &CoeffVector<Self::Elem>, budget: &Budget) -> Res<(bool, Value)>;
}

impl Checker for EquationFF {
    type Elem = FieldElem;

    fn useful_on(&self, v: &CoeffVector<FieldElem>) -> Res<bool> {
        Ok(self.base().is_zero(&self.eval(v)?.0))
    }

    fn witness_entry(&self, v: &CoeffVector<FieldElem>, _: &Budget) -> Res<(bool, Value)> {
        let (value, verdict) = self.eval(v)?;
        let nonzero = !self.base().is_zero(&value);
        let verdict = match verdict {
            VerdictFF::Or => json!({"kind": "or"}),
            VerdictFF::Factor { point, coord } => json!({"kind": "factor", "point": point, "coord": coord + 1}),
            VerdictFF::Nonzero => json!({"kind": "nonzero"}),
        };
        Ok((nonzero, json!({"value": self.base().encode(&value), "verdict": verdict})))
    }
}

impl Checker for EquationInt {
    type Elem = BigInt;

    fn useful_on(&self, v: &CoeffVector<BigInt>) -> Res<bool> {
        Ok(self.verdict(v)? != VerdictInt::Nonzero)
    }

    fn witness_entry(&self, v: &CoeffVector<BigInt>, budget: &Budget) -> Res<(bool, Value)> {
        let verdict = self.verdict(v)?;
        let exact = self.eval_exact(v, budget)?;
        let nonzero = verdict == VerdictInt::Nonzero;
        if nonzero == (exact.sign() == num_bigint::Sign::NoSign) {
            return Err(invalid("exact evaluation disagrees with the verdict"));
        }
        let verdict = match verdict {
            VerdictInt::Or => json!({"kind": "or"}),
            VerdictInt::Factor { point, r } => json!({"kind": "factor", "point": point, "r": r}),
            VerdictInt::Nonzero => json!({"kind": "nonzero"}),
        };
        Ok((nonzero, json!({"value_bits": exact.bits(), "verdict": verdict})))
    }
}

fn check_all<E: Checker>(
    eq: &E,
    members: &[CoeffVector<E::Elem>],
    witnesses: &[(String, CoeffVector<E::Elem>)],
    budget: &Budget,
) -> Res<(Option<usize>, Vec<Value>, bool)> {
    let mut failure = None;
    for (i, v) in members.iter().enumerate() {
        if !eq.useful_on(v)? {
            failure = Some(i);
            break;
        }
    }
    let mut entries = Vec::new();
    let mut all_nonzero = true;
    for (path, w) in witnesses {
        let (nonzero, mut entry) = eq.witness_entry(w, budget)?;
        all_nonzero &= nonzero;
        entry["path"] = json!(path);
        entry["nonzero"] = json!(nonzero);
        entries.push(entry);
    }
    Ok((failure, entries, all_nonzero))
}

fn read_witness<R: Ring>(ring: &R, path: &Path, rec: &mut Record) -> Res<(String, CoeffVector<R::Elem>)> {
    let file: WitnessFile = from_json(&rec.read(path)?)?;
    Ok((path.display().to_string(), file.vector.decode(ring)?))
}

fn verify(a: &VerifyArgs, budget: &Budget, rec: &mut Record) -> Res<()> {
    rec.command = "verify".into();
    let manifest: EquationManifest = from_json(&rec.read(&a.equation)?)?;
    let hs_path = resolve(&manifest.hitting_set, &a.equation);
    let hs_file: HittingSetFile = from_json(&rec.read(&hs_path)?)?;
    let class_file: ClassFile = from_json(&rec.read(&a.class)?)?;
    if (class_file.n, class_file.d) != (manifest.n, manifest.d) {
        return Err(invalid(format!(
            "class has (n, d) = ({}, {}), equation has ({}, {})",
            class_file.n, class_file.d, manifest.n, manifest.d
        )));
    }
    let (failure, entries, all_nonzero, members, counterexample) = match manifest.mode.as_str() {
        "ff" => {
            let hs = hs_file.decode_ff()?;
            let base = FieldSpec::prime(hs.ring().p())?;
            let class = class_file.decode(&base)?;
            let eq = build_equation_ff(&base, hs)?;
            let ws = a.witnesses.iter().map(|p| read_witness(&base, p, rec)).collect::<Res<Vec<_>>>()?;
            let (f, e, nz) = check_all(&eq, &class.members, &ws, budget)?;
            let ce = f.map(|i| serde_json::to_value(CoeffVectorFile::new(&base, &class.members[i])).unwrap());
            (f, e, nz, class.len(), ce)
        }
        "int" => {
            let eq = build_equation_int(hs_file.decode_int()?, budget)?;
            let class = class_file.decode(&Integers)?;
            if let Some(i) = eq.check_bounds(&class.members) {
                return Err(invalid(format!("class member #{i} exceeds M or R on the hitting set")));
            }
            let ws = a.witnesses.iter().map(|p| read_witness(&Integers, p, rec)).collect::<Res<Vec<_>>>()?;
            let (f, e, nz) = check_all(&eq, &class.members, &ws, budget)?;
            let ce = f.map(|i| serde_json::to_value(CoeffVectorFile::new(&Integers, &class.members[i])).unwrap());
            (f, e, nz, class.len(), ce)
        }
        other => return Err(invalid(format!("unknown equation mode {other:?}"))),
    };
    let useful = failure.is_none();
    let verdict = if !useful {
        "not useful"
    } else if a.witnesses.is_empty() {
        "useful (non-triviality unchecked)"
    } else if all_nonzero {
        "useful and non-trivial"
    } else {
        "useful but trivial on a witness"
    };
    let report = json!({
        "mode": manifest.mode,
        "members": members,
        "useful": useful,
        "first_failure": failure,
        "counterexample": counterexample,
        "witnesses": entries,
        "N": manifest.arity,
        "degree_bound": manifest.degree_bound,
        "verdict": verdict,
    });
    let text = to_canonical_json(&report);
    print!("{text}");
    if a.witnesses.is_empty() {
        eprintln!("warning: no witness given, non-triviality not checked");
    }
    rec.verdict = verdict.into();
    if let Some(path) = &a.report {
        rec.write(path, &text)?;
    }
    match failure {
        Some(i) => Err(CliError::Falsified(format!("equation is nonzero on class member #{i}"))),
        None if !all_nonzero => Err(CliError::Falsified("equation vanishes on a witness".into())),
        None => Ok(()),
    }
}

fn vnp_demo(a: &VnpDemoArgs, budget: &Budget) -> Res<()> {
    let mut params = ClassParams::new(a.n, a.d, a.n + a.m, Vec::new());
    params.m = a.m;
    let bound = definable_hs_bound(params.s as u64);
    match a.mode {
        Mode::Ff => {
            let base = FieldSpec::prime(a.p)?;
            params.constants = default_constants(&base);
            let k = FieldSpec::new_bounded(a.p, default_ext_degree(a.p, a.d), budget.field_size)?;
            let class = enumerate_class(&base, &params, budget)?;
            let hs = greedy_hitting_set(&k, &class, &ff_grid(&k, a.n, budget)?, None)?;
            println!("class: {} members, |H| = {} (size bound {bound})", class.len(), hs.len());
            let basis = kernel_basis_ff(&eval_matrix_ff(&hs, budget)?);
            let g = sample_kernel(&base, &basis, a.seed)?;
            let eq = build_equation_ff(&base, hs)?;
            let (failure, _, nonzero) = check_all(&eq, &class.members, &[(String::new(), g)], budget)?;
            println!("equation: N = {}, degree bound {}", eq.arity(), eq.formal_degree());
            report_demo(failure, nonzero)
        }
        Mode::Int => {
            params.constants = default_constants(&Integers);
            params.delta = true;
            let grid_bound = a.bound.unwrap_or_else(|| definable_grid_bound(u64::from(a.d), params.s as u64, 3));
            let class = enumerate_class(&Integers, &params, budget)?;
            let hs = greedy_hitting_set(&Integers, &class, &int_grid(grid_bound, a.n, budget)?, Some(grid_bound))?;
            println!(
                "class: {} members, |H| = {} in [{grid_bound}]^{} (size bound {bound})",
                class.len(),
                hs.len(),
                a.n
            );
            let w = siegel_search(&hs, budget)?;
            let eq = build_equation_int(hs, budget)?;
            let (failure, _, nonzero) = check_all(&eq, &class.members, &[(String::new(), w.h)], budget)?;
            println!("equation: N = {}, M = {}, l = {}, R = {}", eq.arity(), eq.m_bound(), eq.ell(), eq.big_r());
            report_demo(failure, nonzero)
        }
    }
}

fn report_demo(failure: Option<usize>, nonzero: bool) -> Res<()> {
    match failure {
        Some(i) => Err(CliError::Falsified(format!("equation is nonzero on class member #{i}"))),
        None if !nonzero => Err(CliError::Falsified("equation vanishes on the witness".into())),
        None => {
            println!("useful on every member, nonzero on the witness");
            Ok(())
        }
    }
}

fn replay(a: &ReplayArgs, threads: Option<usize>, budget: &Budget) -> Res<()> {
    let text = std::fs::read_to_string(&a.manifest).map_err(|e| invalid(format!("{}: {e}", a.manifest.display())))?;
    let recorded: ExperimentManifest = from_json(&text)?;
    let argv = std::iter::once("forge".to_string()).chain(recorded.args.iter().cloned());
    let mut cli = <Cli as clap::Parser>::try_parse_from(argv).map_err(|e| invalid(e.to_string()))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(invalid("a replay manifest cannot record another replay"));
    }
    if threads.is_some() {
        cli.threads = threads;
    }
    let outcome = run(&cli, &recorded.args, budget, false);
    if let Err(CliError::Invalid(_)) = outcome {
        return outcome;
    }
    let mut mismatches = 0;
    for (path, digest) in &recorded.outputs {
        let now = sha256_file(Path::new(path))?;
        let same = &now == digest;
        mismatches += usize::from(!same);
        println!("{} {path}", if same { "match" } else { "DIFFERS" });
    }
    if mismatches == 0 {
        println!("replay reproduces all {} outputs", recorded.outputs.len());
        Ok(())
    } else {
        Err(CliError::Falsified(format!("{mismatches} outputs differ from the recorded run")))
    }
}
