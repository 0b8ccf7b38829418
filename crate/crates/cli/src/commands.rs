use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use chains_core::absorbing::{canonical_form, fundamental_matrix};
use chains_core::demo::line_chain;
use chains_core::graph::{rw_set_representative, same_rw_set, RepresentativeKind};
use chains_core::laplacian::{
    build_laplacian, directed_laplacian, gft, quadratic_form, smooth_spectrum, LaplacianMatrix, LaplacianVariant,
    QUADRATIC_FORM_TOL,
};
use chains_core::numlin;
use chains_core::reversal::{
    k_matrix, reversibility, reversibilize, time_reverse, ReversibilityMode, ReversibilizeMode, Witness,
    DETAILED_BALANCE_TOL,
};
use chains_core::spectral::{decompose_with, spectral_evolve, taxonomy, SpectralDecomposition};
use chains_core::stationary::{combine, flow_matrix, stationary_basis, stationary_residual};
use chains_core::structure::{classify, ClassStructure, Periodicity, EDGE_TOL};
use chains_core::surfer::{google_matrix, pagerank, SurferConfig};
use chains_core::{Distribution, TransitionMatrix};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::args::{Command, Mode, ReversibilityTest, Variant};
use crate::input::{parse, Document, InputError, InputFormat};
use crate::report::{self, cell, chain_document, columns, complex, complex_vector, labels, matrix, num, vector, Table};

#[derive(Debug)]
pub enum CliError {
    Input(InputError),
    Core(chains_core::Error),
    Usage(String),
}

impl CliError {
    /// 3 for numerical failures, 2 for everything the input is to blame for.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 3,
            CliError::Input(InputError::Validation(e)) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<chains_core::Error> for CliError {
    fn from(e: chains_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Settings {
    pub tol: f64,
    pub seed: u64,
    pub verbose: bool,
    pub input_format: Option<InputFormat>,
}

pub struct Output {
    pub digest: String,
    pub result: Value,
    pub table: Option<Table>,
    pub tolerances: BTreeMap<String, f64>,
}

struct Loaded {
    doc: Document,
    digest: String,
}

fn load(path: &Path, s: &Settings) -> Result<Loaded> {
    let bytes = std::fs::read(path).map_err(|e| InputError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| InputError::Parse {
        line: 1,
        reason: "input is not UTF-8".into(),
    })?;
    let format = s.input_format.unwrap_or_else(|| InputFormat::guess(path));
    Ok(Loaded {
        doc: parse(&text, format, s.tol)?,
        digest: report::digest(&bytes),
    })
}

fn state_index(chain: &TransitionMatrix, label: &str) -> Result<usize> {
    chain
        .space()
        .index_of(label)
        .ok_or_else(|| CliError::Usage(format!("unknown state {label:?}")))
}

struct Builder {
    digest: String,
    tolerances: BTreeMap<String, f64>,
}

impl Builder {
    fn new(digest: String, s: &Settings) -> Self {
        Builder {
            digest,
            tolerances: BTreeMap::from([("row_sum".to_string(), s.tol)]),
        }
    }

    fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    fn finish(self, result: Value, table: Option<Table>) -> Output {
        Output {
            digest: self.digest,
            result,
            table,
            tolerances: self.tolerances,
        }
    }
}

pub fn run(command: &Command, s: &Settings) -> Result<Output> {
    match command {
        Command::Validate(i) => validate(&load(&i.input, s)?, s),
        Command::Classify(i) => {
            let l = load(&i.input, s)?;
            let c = l.doc.chain()?;
            let st = classify(&c);
            Ok(Builder::new(l.digest, s).tol("edge", EDGE_TOL).finish(structure_json(&c, &st), None))
        }
        Command::Stationary { input, weights } => stationary(&load(&input.input, s)?, weights.as_deref(), s),
        Command::Spectrum { input, spectral } => spectrum(&load(&input.input, s)?, spectral.eps, false, s),
        Command::Taxonomy { input, spectral } => spectrum(&load(&input.input, s)?, spectral.eps, true, s),
        Command::Evolve {
            input,
            steps,
            from,
            mu,
            spectral,
        } => evolve(&load(&input.input, s)?, *steps, from.as_deref(), mu.as_deref(), *spectral, s),
        Command::Simulate {
            input,
            from,
            steps,
            trajectories,
        } => simulate(&load(&input.input, s)?, from, *steps, *trajectories, s),
        Command::Reverse { input, test } => reverse(&load(&input.input, s)?, *test, s),
        Command::Reversibilize { input, mode } => {
            let l = load(&input.input, s)?;
            let c = l.doc.chain()?;
            let st = classify(&c);
            let b = stationary_basis(&c, &st)?;
            let m = match mode {
                Mode::Additive => ReversibilizeMode::Additive,
                Mode::Multiplicative => ReversibilizeMode::Multiplicative,
            };
            let r = reversibilize(&c, &st, &b, m)?;
            let result = json!({
                "chain": chain_document(&r),
                "mode": match mode { Mode::Additive => "additive", Mode::Multiplicative => "multiplicative" },
                "pi": vector(&b.canonical()),
            });
            Ok(Builder::new(l.digest, s).finish(result, None))
        }
        Command::Kmatrix(i) => {
            let l = load(&i.input, s)?;
            let c = l.doc.chain()?;
            let st = classify(&c);
            let b = stationary_basis(&c, &st)?;
            let k = k_matrix(&c, &st, &b)?;
            let asym = k.asymmetry();
            let result = json!({
                "asymmetry": num(asym),
                "k": matrix(&k.k),
                "states": c.labels(),
                "symmetric": asym <= DETAILED_BALANCE_TOL,
            });
            Ok(Builder::new(l.digest, s)
                .tol("detailed_balance", DETAILED_BALANCE_TOL)
                .finish(result, None))
        }
        Command::Laplacian { input, variant } => {
            let l = load(&input.input, s)?;
            let lap = laplacian_of(&l.doc, *variant)?;
            let mut result = json!({
                "degrees": vector(&lap.degrees),
                "laplacian": matrix(&lap.m),
                "states": doc_labels(&l.doc)?,
                "variant": variant_name(*variant),
            });
            if s.verbose {
                result["weights"] = matrix(&lap.weights);
            }
            Ok(Builder::new(l.digest, s).finish(result, None))
        }
        Command::Embed { input, k, variant } => embed(&load(&input.input, s)?, *k, *variant, s),
        Command::Gft { input, signal, variant } => graph_fourier(&load(&input.input, s)?, signal, *variant, s),
        Command::Pagerank {
            input,
            damping,
            pagerank_tol,
            max_iters,
        } => rank(&load(&input.input, s)?, *damping, *pagerank_tol, *max_iters, s),
        Command::Absorb(i) => absorb(&load(&i.input, s)?, s),
        Command::Rwset { input, other } => rwset(&load(&input.input, s)?, other.as_deref(), s),
        Command::DemoLineChain { n, p_right, perturb, k } => demo(*n, *p_right, *perturb, *k, s),
    }
}

fn doc_labels(doc: &Document) -> Result<Vec<String>> {
    Ok(match doc {
        Document::Chain(c) => c.labels().to_vec(),
        Document::Graph(g) => g.graph.labels().to_vec(),
    })
}

fn validate(l: &Loaded, s: &Settings) -> Result<Output> {
    let mut result = json!({ "kind": l.doc.kind(), "valid": true });
    match &l.doc {
        Document::Chain(c) => {
            result["n"] = json!(c.n());
            result["states"] = json!(c.labels());
            if s.verbose {
                result["P"] = matrix(c.p());
            }
        }
        Document::Graph(g) => {
            let graph = &g.graph;
            result["n"] = json!(graph.n());
            result["states"] = json!(graph.labels());
            result["directive"] = json!(g.directive.as_str());
            result["undirected"] = json!(graph.is_undirected());
            result["balanced"] = json!(graph.is_balanced());
            result["volume"] = num(graph.volume());
            result["components"] = json!(graph.component_count());
            result["out_degrees"] = vector(&graph.out_degrees());
            result["in_degrees"] = vector(&graph.in_degrees());
            if s.verbose {
                result["weights"] = matrix(graph.w());
            }
        }
    }
    Ok(Builder::new(l.digest.clone(), s).finish(result, None))
}

fn periodicity(p: Periodicity) -> (&'static str, Value) {
    match p {
        Periodicity::Aperiodic => ("aperiodic", json!(1)),
        Periodicity::Periodic(d) => ("periodic", json!(d)),
        Periodicity::Mixed => ("mixed", Value::Null),
    }
}

fn structure_json(c: &TransitionMatrix, st: &ClassStructure) -> Value {
    let names = c.labels();
    let classes: Vec<Value> = st
        .classes()
        .iter()
        .enumerate()
        .map(|(k, states)| {
            json!({
                "period": st.period[k],
                "recurrent": st.recurrent[k],
                "states": labels(names, states),
            })
        })
        .collect();
    let (kind, period) = periodicity(st.flags.periodicity);
    json!({
        "absorbing": st.flags.absorbing,
        "absorbing_states": labels(names, &st.flags.absorbing_states),
        "classes": classes,
        "ergodic": st.flags.ergodic,
        "irreducible": st.flags.irreducible,
        "period": period,
        "periodicity": kind,
        "recurrent": st.flags.recurrent,
        "transient_states": labels(names, &st.transient_states()),
    })
}

fn stationary(l: &Loaded, weights: Option<&[f64]>, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let st = classify(&c);
    let b = stationary_basis(&c, &st)?;
    let pi = match weights {
        Some(w) => combine(&b, w)?,
        None => b.canonical(),
    };
    let names = c.labels();
    let basis: Vec<Value> = b
        .per_class
        .iter()
        .map(|(class, v)| json!({ "class": labels(names, &st.classes()[*class]), "pi": vector(v) }))
        .collect();
    let mut result = json!({
        "basis": basis,
        "pi": vector(&pi),
        "residual": num(stationary_residual(&c, &pi)?),
        "states": names,
        "unique": b.len() == 1,
        "limiting": st.flags.ergodic,
    });
    if s.verbose {
        result["flow"] = matrix(&flow_matrix(&c, &pi)?.f);
    }
    let mut table = Table::new(&["state", "pi"]);
    for (name, v) in names.iter().zip(&pi) {
        table.rows.push(vec![name.clone(), cell(*v)]);
    }
    Ok(Builder::new(l.digest.clone(), s)
        .tol("stationary_residual", chains_core::stationary::OUTPUT_STATIONARY_TOL)
        .finish(result, Some(table)))
}

fn eigen_table(d: &SpectralDecomposition, eps: f64) -> (Vec<Value>, Table) {
    let labels = taxonomy(d, eps);
    let mut table = Table::new(&["re", "im", "abs", "label"]);
    let values = d
        .values()
        .iter()
        .zip(&labels)
        .map(|(v, l)| {
            table.rows.push(vec![cell(v.re), cell(v.im), cell(v.norm()), l.as_str().to_string()]);
            json!({ "abs": num(v.norm()), "im": num(v.im), "label": l.as_str(), "re": num(v.re) })
        })
        .collect();
    (values, table)
}

fn spectrum(l: &Loaded, eps: f64, taxonomy_only: bool, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let st = classify(&c);
    let d = decompose_with(&c, &st)?;
    let (values, table) = eigen_table(&d, eps);
    let result = if taxonomy_only {
        let mut counts = Map::new();
        for l in taxonomy(&d, eps) {
            let e = counts.entry(l.as_str()).or_insert(json!(0));
            *e = json!(e.as_u64().unwrap_or(0) + 1);
        }
        json!({ "counts": counts, "eigenvalues": values })
    } else {
        let mut r = json!({
            "diagonalizable": d.diagonalizable(),
            "eigenvalues": values,
            "left_sums": d.left_sums().into_iter().map(complex).collect::<Vec<_>>(),
            "spectral_radius": num(d.spectral_radius),
            "unit_multiplicity": d.unit_multiplicity,
        });
        if s.verbose {
            let p = &d.pairs;
            r["right_vectors"] = (0..p.len()).map(|k| complex_vector(&p.right(k))).collect();
            r["left_vectors"] = (0..p.len()).map(|k| complex_vector(&p.left(k))).collect();
            r["residual"] = num(p.residual);
        }
        r
    };
    Ok(Builder::new(l.digest.clone(), s)
        .tol("taxonomy", eps)
        .tol("cluster", numlin::CLUSTER_TOL)
        .tol("rank", numlin::RANK_TOL)
        .finish(result, Some(table)))
}

fn evolve(
    l: &Loaded,
    steps: usize,
    from: Option<&str>,
    mu: Option<&[f64]>,
    spectral: bool,
    s: &Settings,
) -> Result<Output> {
    let c = l.doc.chain()?;
    let start = match (from, mu) {
        (Some(label), _) => Distribution::point(c.n(), state_index(&c, label)?)?,
        (None, Some(v)) => Distribution::new(v.to_vec())?,
        (None, None) => return Err(CliError::Usage("evolve needs --from or --mu".into())),
    };
    let out = c.evolve(&start, steps)?;
    let mut result = json!({ "distribution": vector(&out), "states": c.labels(), "steps": steps });
    if spectral {
        let k = u32::try_from(steps).map_err(|_| CliError::Usage("too many steps for --spectral".into()))?;
        let d = decompose_with(&c, &classify(&c))?;
        let e = spectral_evolve(&d, &start, k)?;
        result["spectral"] = json!({
            "coordinates": e.coordinates.into_iter().map(complex).collect::<Vec<_>>(),
            "evolved": vector(&e.evolved),
            "persistent_part": vector(&e.persistent_part),
            "transient_part": vector(&e.transient_part),
        });
    }
    let mut table = Table::new(&["state", "probability"]);
    for (name, v) in c.labels().iter().zip(out.iter()) {
        table.rows.push(vec![name.clone(), cell(*v)]);
    }
    Ok(Builder::new(l.digest.clone(), s).finish(result, Some(table)))
}

fn simulate(l: &Loaded, from: &str, steps: usize, trajectories: usize, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let start = state_index(&c, from)?;
    let names = c.labels();
    let (result, table) = if trajectories == 1 {
        let t = c.sample(start, steps + 1, s.seed)?;
        let mut table = Table::new(&["t", "state"]);
        for (k, &i) in t.states.iter().enumerate() {
            table.rows.push(vec![k.to_string(), names[i].clone()]);
        }
        (json!({ "seed": s.seed, "trajectory": labels(names, &t.states) }), table)
    } else {
        let freq = c.occupancy(start, steps, trajectories, s.seed)?;
        let mut header = vec!["t"];
        header.extend(names.iter().map(String::as_str));
        let mut table = Table::new(&header);
        for t in 0..freq.rows() {
            let mut row = vec![t.to_string()];
            row.extend(freq.row(t).iter().map(|&v| cell(v)));
            table.rows.push(row);
        }
        let result = json!({
            "occupancy": matrix(&freq),
            "seed": s.seed,
            "states": names,
            "trajectories": trajectories,
        });
        (result, table)
    };
    Ok(Builder::new(l.digest.clone(), s).finish(result, Some(table)))
}

fn witness_json(names: &[String], w: &Option<Witness>) -> Value {
    match w {
        None => Value::Null,
        Some(Witness::Pair(i, j)) => json!({ "pair": [names[*i], names[*j]] }),
        Some(Witness::Cycle(cyc)) => json!({ "cycle": labels(names, cyc) }),
    }
}

fn reverse(l: &Loaded, test: ReversibilityTest, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let st = classify(&c);
    let b = stationary_basis(&c, &st)?;
    let mode = match test {
        ReversibilityTest::DetailedBalance => ReversibilityMode::DetailedBalance,
        ReversibilityTest::Kolmogorov => ReversibilityMode::Kolmogorov,
    };
    let r = reversibility(&c, &st, &b, mode)?;
    let reversed = if st.flags.recurrent {
        chain_document(&time_reverse(&c, &st, &b)?)
    } else {
        Value::Null
    };
    let result = json!({
        "chain": reversed,
        "detailed_balance_residual": num(r.db_residual),
        "recurrent": r.recurrent,
        "reversible": r.reversible,
        "semi_reversible": r.semi_reversible,
        "test": match test {
            ReversibilityTest::DetailedBalance => "detailed_balance",
            ReversibilityTest::Kolmogorov => "kolmogorov",
        },
        "witness": witness_json(c.labels(), &r.witness),
    });
    Ok(Builder::new(l.digest.clone(), s)
        .tol("detailed_balance", DETAILED_BALANCE_TOL)
        .tol("cycle_product", chains_core::reversal::CYCLE_PRODUCT_TOL)
        .finish(result, None))
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Normalized => "normalized",
        Variant::Unnormalized => "unnormalized",
        Variant::Directed => "directed",
    }
}

/// Graph documents give graph Laplacians; chain documents use the undirected
/// member of their random walk set, or the directed Laplacian.
fn laplacian_of(doc: &Document, variant: Variant) -> Result<LaplacianMatrix> {
    let lib = match variant {
        Variant::Normalized => LaplacianVariant::Normalized,
        Variant::Unnormalized => LaplacianVariant::Unnormalized,
        Variant::Directed => {
            let c = doc.chain()?;
            let st = classify(&c);
            let b = stationary_basis(&c, &st)?;
            return Ok(directed_laplacian(&c, &st, &b)?);
        }
    };
    match doc {
        Document::Graph(g) => Ok(build_laplacian(&g.graph, lib)?),
        Document::Chain(c) => {
            let st = classify(c);
            let b = stationary_basis(c, &st)?;
            let rep = rw_set_representative(c, &st, &b, RepresentativeKind::Undirected).ok_or_else(|| {
                CliError::Usage("chain is not reversible; use --variant directed".into())
            })?;
            Ok(build_laplacian(&rep, lib)?)
        }
    }
}

fn embed(l: &Loaded, k: Option<usize>, variant: Variant, s: &Settings) -> Result<Output> {
    let lap = laplacian_of(&l.doc, variant)?;
    let n = lap.m.rows();
    let spec = smooth_spectrum(&lap, k.unwrap_or(n))?;
    let names = doc_labels(&l.doc)?;
    let walk: Vec<f64> = spec.values.iter().map(|v| 1.0 - v).collect();
    let result = json!({
        "left_transformed": columns(&spec.left_transformed),
        "right_transformed": columns(&spec.right_transformed),
        "states": names,
        "values": vector(&spec.values),
        "variant": variant_name(variant),
        "vectors": columns(&spec.vectors),
        "walk_eigenvalues": vector(&walk),
    });
    let mut header = vec!["state".to_string()];
    header.extend((0..spec.k()).map(|w| format!("y{w}")));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (i, name) in names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(spec.vectors.row(i).iter().map(|&v| cell(v)));
        table.rows.push(row);
    }
    Ok(Builder::new(l.digest.clone(), s).finish(result, Some(table)))
}

fn graph_fourier(l: &Loaded, signal: &[f64], variant: Variant, s: &Settings) -> Result<Output> {
    let lap = laplacian_of(&l.doc, variant)?;
    let spec = smooth_spectrum(&lap, lap.m.rows())?;
    let coeffs = gft(&spec, signal)?;
    let smoothness = quadratic_form(&lap, signal)?;
    let mut table = Table::new(&["omega", "lambda", "coefficient"]);
    for (w, (lam, c)) in spec.values.iter().zip(&coeffs).enumerate() {
        table.rows.push(vec![w.to_string(), cell(*lam), cell(*c)]);
    }
    let result = json!({
        "coefficients": vector(&coeffs),
        "smoothness": num(smoothness),
        "values": vector(&spec.values),
        "variant": variant_name(variant),
    });
    Ok(Builder::new(l.digest.clone(), s)
        .tol("quadratic_form", QUADRATIC_FORM_TOL)
        .finish(result, Some(table)))
}

fn rank(l: &Loaded, alpha: f64, tol: f64, max_iters: usize, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let cfg = SurferConfig::uniform(c.n(), alpha)?;
    let g = google_matrix(&c, &cfg)?;
    let pr = pagerank(&c, &cfg, tol, max_iters)?;
    let mut result = json!({
        "damping": num(alpha),
        "ergodic": classify(&g).flags.ergodic,
        "rank": vector(&pr),
        "residual": num(stationary_residual(&g, &pr)?),
        "states": c.labels(),
    });
    if s.verbose {
        result["google_matrix"] = matrix(g.p());
    }
    let mut table = Table::new(&["state", "rank"]);
    for (name, v) in c.labels().iter().zip(&pr) {
        table.rows.push(vec![name.clone(), cell(*v)]);
    }
    Ok(Builder::new(l.digest.clone(), s).tol("pagerank", tol).finish(result, Some(table)))
}

fn absorb(l: &Loaded, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let st = classify(&c);
    let d = canonical_form(&c, &st)?;
    let f = fundamental_matrix(&d)?;
    let b = f.n.matmul(&d.r)?;
    let names = c.labels();
    let result = json!({
        "absorbing": labels(names, d.absorbing()),
        "absorption_probabilities": matrix(&b),
        "expected_steps": vector(&f.expected_steps),
        "fundamental": matrix(&f.n),
        "q": matrix(&d.q),
        "r": matrix(&d.r),
        "transient": labels(names, d.transient()),
    });
    Ok(Builder::new(l.digest.clone(), s)
        .tol("absorbing", chains_core::structure::ABSORBING_TOL)
        .finish(result, None))
}

fn rwset(l: &Loaded, other: Option<&Path>, s: &Settings) -> Result<Output> {
    let c = l.doc.chain()?;
    let st = classify(&c);
    let b = stationary_basis(&c, &st)?;
    let rep = |kind| rw_set_representative(&c, &st, &b, kind).map_or(Value::Null, |g| matrix(g.w()));
    let mut result = json!({
        "balanced": rep(RepresentativeKind::Balanced),
        "states": c.labels(),
        "undirected": rep(RepresentativeKind::Undirected),
    });
    let mut digest = l.digest.clone();
    if let Some(path) = other {
        let o = load(path, s)?;
        let (Document::Graph(g1), Document::Graph(g2)) = (&l.doc, &o.doc) else {
            return Err(CliError::Usage("--other compares two graph documents".into()));
        };
        if g1.graph.n() != g2.graph.n() {
            return Err(chains_core::Error::DimensionMismatch {
                expected: g1.graph.n(),
                found: g2.graph.n(),
            }
            .into());
        }
        result["scaling"] = same_rw_set(&g1.graph, &g2.graph).map_or(Value::Null, |a| vector(&a.diag));
        digest = report::digest(format!("{}{}", l.digest, o.digest).as_bytes());
    }
    Ok(Builder::new(digest, s).tol("detailed_balance", DETAILED_BALANCE_TOL).finish(result, None))
}

fn demo(n: usize, p_right: f64, perturb: f64, k: usize, s: &Settings) -> Result<Output> {
    let c = line_chain(n, p_right, perturb, s.seed)?;
    if k == 0 || k > n {
        return Err(CliError::Usage(format!("-k must lie in 1..={n}")));
    }
    let st = classify(&c);
    let b = stationary_basis(&c, &st)?;
    let pi = b.canonical();
    let rep = rw_set_representative(&c, &st, &b, RepresentativeKind::Undirected)
        .ok_or_else(|| CliError::Usage("line chain is not recurrent for this p_right".into()))?;
    let lap = build_laplacian(&rep, LaplacianVariant::Normalized)?;
    let spec = smooth_spectrum(&lap, k)?;
    let walk: Vec<f64> = spec.values.iter().map(|v| 1.0 - v).collect();

    // the λ = 1 right eigenvector straight from the general solver, scaled to mean 1
    let e = numlin::eigen(c.p())?;
    let unit = (0..e.len())
        .min_by(|&a, &b| (e.values[a] - 1.0).norm().total_cmp(&(e.values[b] - 1.0).norm()))
        .expect("nonempty spectrum");
    let r = e.right(unit);
    let mean: Complex64 = r.iter().sum::<Complex64>() / n as f64;
    let unit_right: Vec<f64> = r.iter().map(|v| (v / mean).re).collect();
    let ones_gap = unit_right.iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));

    let mut result = json!({
        "left_vectors": columns(&spec.left_transformed),
        "n": n,
        "p_right": num(p_right),
        "perturb": num(perturb),
        "pi": vector(&pi),
        "right_vectors": columns(&spec.right_transformed),
        "seed": s.seed,
        "unit_right_vector": vector(&unit_right),
        "unit_right_vector_max_deviation": num(ones_gap),
        "walk_eigenvalues": vector(&walk),
    });
    if s.verbose {
        result["chain"] = chain_document(&c);
    }
    let mut header = vec!["state".to_string(), "pi".to_string()];
    header.extend((0..k).map(|w| format!("r{w}")));
    header.extend((0..k).map(|w| format!("l{w}")));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for (i, (name, v)) in c.labels().iter().zip(&pi).enumerate() {
        let mut row = vec![name.clone(), cell(*v)];
        row.extend(spec.right_transformed.row(i).iter().map(|&v| cell(v)));
        row.extend(spec.left_transformed.row(i).iter().map(|&v| cell(v)));
        table.rows.push(row);
    }
    let params = format!("demo-line-chain n={n} p_right={p_right} perturb={perturb} seed={}", s.seed);
    Ok(Builder::new(report::digest(params.as_bytes()), s)
        .tol("detailed_balance", DETAILED_BALANCE_TOL)
        .finish(result, Some(table)))
}
