use std::fs;
use std::path::Path;

use colorbound::bounds::{
    confidence_slack, generalization_bound, stability_bound, upper_bound_colors, BoundOptions,
    BoundReport, BoundRow, GenBoundInputs, LossSpec,
};
use colorbound::coloring::{is_finer, wl_refine, ColoringFunction};
use colorbound::graph::{generate_sample, to_jsonl, GraphFamily, RandomSampleSpec};
use colorbound::partition::{multiplicity_diff, partition_sample, MultiplicityEntry};
use colorbound::rademacher::{exact_rademacher, mc_rademacher};
use colorbound::{ColorHistogram, ColoringKind, Error as CoreError, GraphSample, RademacherEstimate, SamplePartition};
use serde::Serialize;

use crate::args::{
    BoundArgs, ColorArgs, EstimateArgs, FamilyArg, GenBoundArgs, HierarchyArgs, StabilityArgs,
    SynthArgs,
};
use crate::{load_sample, svg, CliError, CliResult, SCHEMA_VERSION};

const TOL: f64 = 1e-12;

/// Reports render to CSV as `name, value, inputs, note` rows.
pub trait Report: Serialize {
    fn rows(&self) -> Vec<BoundRow>;
}

/// A finished report, plus the invariant it found violated, if any. The
/// report is still written in that case; the process then exits with 5.
pub struct Outcome<R> {
    pub report: R,
    pub violation: Option<String>,
}

impl<R> Outcome<R> {
    fn ok(report: R) -> Self {
        Self {
            report,
            violation: None,
        }
    }
}

fn row(name: impl Into<String>, value: f64, inputs: impl Into<String>, note: impl Into<String>) -> BoundRow {
    BoundRow {
        name: name.into(),
        value,
        inputs: inputs.into(),
        note: note.into(),
    }
}

/// Histograms under `kind`, with the WL round count when applicable.
fn color_sample(kind: ColoringKind, sample: &GraphSample) -> CliResult<(Vec<ColorHistogram>, Option<usize>)> {
    if kind == ColoringKind::Wl {
        let (coloring, hists) = wl_refine(sample);
        return Ok((hists, Some(coloring.iteration_count)));
    }
    Ok((kind.histograms(sample)?, None))
}

#[derive(Debug, Serialize)]
pub struct ColorReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub coloring: ColoringKind,
    pub m: usize,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wl_iterations: Option<usize>,
    pub histograms: Vec<ColorHistogram>,
    pub partition: SamplePartition,
    pub warnings: Vec<String>,
}

impl Report for ColorReport {
    fn rows(&self) -> Vec<BoundRow> {
        let mut rows = vec![row("p", self.p as f64, format!("m={}", self.m), self.coloring.to_string())];
        rows.extend(self.partition.classes().iter().enumerate().map(|(j, c)| {
            row(
                format!("class_{j}"),
                c.multiplicity as f64,
                serde_json::to_string(&c.key).unwrap_or_default(),
                format!("members={:?}", c.members).replace(", ", " "),
            )
        }));
        rows
    }
}

pub fn color(args: &ColorArgs) -> CliResult<Outcome<ColorReport>> {
    let loaded = load_sample(&args.input)?;
    let kind = ColoringKind::from(args.coloring);
    let (histograms, wl_iterations) = color_sample(kind, &loaded.sample)?;
    let partition = partition_sample(&histograms);
    Ok(Outcome::ok(ColorReport {
        schema_version: SCHEMA_VERSION,
        command: "color",
        coloring: kind,
        m: partition.m(),
        p: partition.p(),
        wl_iterations,
        histograms,
        partition,
        warnings: loaded.warnings,
    }))
}

#[derive(Debug, Serialize)]
pub struct BoundCommandReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub coloring: ColoringKind,
    #[serde(flatten)]
    pub bounds: BoundReport,
    pub warnings: Vec<String>,
}

impl Report for BoundCommandReport {
    fn rows(&self) -> Vec<BoundRow> {
        self.bounds.rows()
    }
}

pub fn bound(args: &BoundArgs) -> CliResult<Outcome<BoundCommandReport>> {
    let loaded = load_sample(&args.input)?;
    let kind = ColoringKind::from(args.coloring);
    let (histograms, _) = color_sample(kind, &loaded.sample)?;
    let partition = partition_sample(&histograms);
    let options = BoundOptions {
        sup_l: args.sup_l,
        mesh_points: Some(args.mesh_points),
        ..Default::default()
    };
    let bounds = BoundReport::for_partition(&partition, &options)?;
    if let Some(path) = &args.svg {
        let chart = svg::bound_chart(bounds.m, &[(kind.to_string(), bounds.p, bounds.exact)]);
        write_file(path, &chart)?;
    }
    let violation = (!bounds.is_consistent(TOL)).then(|| {
        format!(
            "bounds out of order: lower {:?}, exact {}, upper {}",
            bounds.lower_uniform, bounds.exact, bounds.upper_colors
        )
    });
    Ok(Outcome {
        report: BoundCommandReport {
            schema_version: SCHEMA_VERSION,
            command: "bound",
            coloring: kind,
            bounds,
            warnings: loaded.warnings,
        },
        violation,
    })
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub coloring: ColoringKind,
    pub m: usize,
    pub p: usize,
    pub seed: u64,
    pub estimate: RademacherEstimate,
    pub exact: f64,
    pub inside_ci: bool,
}

impl Report for EstimateReport {
    fn rows(&self) -> Vec<BoundRow> {
        let e = &self.estimate;
        vec![
            row(
                "monte_carlo",
                e.value,
                format!("trials={};seed={};delta={}", e.trials.unwrap_or(0), self.seed, e.delta.unwrap_or(0.0)),
                format!("half_width={}", e.half_width.unwrap_or(0.0)),
            ),
            row("exact", self.exact, format!("p={};m={}", self.p, self.m), format!("inside_ci={}", self.inside_ci)),
        ]
    }
}

pub fn estimate(args: &EstimateArgs) -> CliResult<Outcome<EstimateReport>> {
    let loaded = load_sample(&args.input)?;
    let kind = ColoringKind::from(args.coloring);
    let (histograms, _) = color_sample(kind, &loaded.sample)?;
    let partition = partition_sample(&histograms);
    let estimate = mc_rademacher(&partition, args.trials, args.seed, args.delta)?;
    let exact = exact_rademacher(&partition).value;
    Ok(Outcome::ok(EstimateReport {
        schema_version: SCHEMA_VERSION,
        command: "estimate",
        coloring: kind,
        m: partition.m(),
        p: partition.p(),
        seed: args.seed,
        inside_ci: estimate.interval_contains(exact),
        estimate,
        exact,
    }))
}

#[derive(Debug, Serialize)]
pub struct StabilityReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub coloring: ColoringKind,
    pub m: usize,
    pub entries: Vec<MultiplicityEntry>,
    pub total_epsilon: usize,
    pub bound: f64,
    pub exact_s: f64,
    pub exact_s_prime: f64,
    pub difference: f64,
    pub holds: bool,
    pub notes: Vec<String>,
}

impl Report for StabilityReport {
    fn rows(&self) -> Vec<BoundRow> {
        let mut rows: Vec<BoundRow> = self
            .entries
            .iter()
            .map(|e| {
                row(
                    "epsilon",
                    e.epsilon as f64,
                    serde_json::to_string(&e.key).unwrap_or_default(),
                    format!("mu={};mu_prime={}", e.mu, e.mu_prime),
                )
            })
            .collect();
        let m = format!("m={}", self.m);
        rows.push(row("stability_bound", self.bound, m.clone(), if self.bound > 1.0 { "vacuous" } else { "" }));
        rows.push(row("exact_s", self.exact_s, m.clone(), ""));
        rows.push(row("exact_s_prime", self.exact_s_prime, m.clone(), ""));
        rows.push(row("difference", self.difference, m, format!("holds={}", self.holds)));
        rows
    }
}

pub fn stability(args: &StabilityArgs) -> CliResult<Outcome<StabilityReport>> {
    let [first, second] = args.input.as_slice() else {
        return Err(CliError::Parse(format!(
            "stability needs exactly two --input values, got {}",
            args.input.len()
        )));
    };
    let a = load_sample(first)?.sample;
    let b = load_sample(second)?.sample;
    if a.len() != b.len() {
        return Err(CliError::SizeMismatch(format!(
            "samples differ in size: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let m = a.len();
    let kind = ColoringKind::from(args.coloring);
    // one coloring run over both samples so color keys are comparable
    let joint = a.concat(&b)?;
    let (histograms, _) = color_sample(kind, &joint)?;
    let part_a = partition_sample(&histograms[..m]);
    let part_b = partition_sample(&histograms[m..]);
    let diff = multiplicity_diff(&part_a, &part_b)?;
    let bound = stability_bound(&diff, m)?;
    let exact_s = exact_rademacher(&part_a).value;
    let exact_s_prime = exact_rademacher(&part_b).value;
    let difference = (exact_s - exact_s_prime).abs();
    let holds = difference <= bound + TOL;
    let mut notes = Vec::new();
    if bound > 1.0 {
        notes.push(format!("bound {bound} is vacuous (> 1); the complexity lies in [0, 1]"));
    }
    let violation = (!holds).then(|| format!("|R_S - R_S'| = {difference} exceeds {bound}"));
    Ok(Outcome {
        report: StabilityReport {
            schema_version: SCHEMA_VERSION,
            command: "stability",
            coloring: kind,
            m,
            total_epsilon: diff.total_epsilon(),
            entries: diff.entries,
            bound,
            exact_s,
            exact_s_prime,
            difference,
            holds,
            notes,
        },
        violation,
    })
}

#[derive(Debug, Serialize)]
pub struct HierarchyRow {
    pub coloring: ColoringKind,
    pub p: usize,
    pub exact: f64,
    pub upper_colors: f64,
}

#[derive(Debug, Serialize)]
pub struct HierarchyReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub m: usize,
    pub rows: Vec<HierarchyRow>,
    pub chain_holds: bool,
    pub notes: Vec<String>,
}

impl Report for HierarchyReport {
    fn rows(&self) -> Vec<BoundRow> {
        self.rows
            .iter()
            .flat_map(|r| {
                let inputs = format!("p={};m={}", r.p, self.m);
                [
                    row(format!("{}.exact", r.coloring), r.exact, inputs.clone(), ""),
                    row(format!("{}.upper_colors", r.coloring), r.upper_colors, inputs, ""),
                ]
            })
            .collect()
    }
}

/// Rows for each coloring from coarsest to finest, and whether each one's
/// partition refines the previous one with non-decreasing `p` and
/// complexity.
pub fn hierarchy_rows(sample: &GraphSample) -> CliResult<(Vec<HierarchyRow>, Vec<SamplePartition>, Vec<String>)> {
    let mut rows = Vec::new();
    let mut partitions = Vec::new();
    let mut notes = Vec::new();
    for kind in ColoringKind::HIERARCHY {
        let histograms = match kind.histograms(sample) {
            Ok(h) => h,
            Err(e @ CoreError::ExactColoringInfeasible { .. }) => {
                notes.push(format!("{kind} row omitted: {e}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let partition = partition_sample(&histograms);
        rows.push(HierarchyRow {
            coloring: kind,
            p: partition.p(),
            exact: exact_rademacher(&partition).value,
            upper_colors: upper_bound_colors(partition.p(), partition.m())?,
        });
        partitions.push(partition);
    }
    Ok((rows, partitions, notes))
}

/// First violation of the refinement chain, if any.
pub fn check_chain(rows: &[HierarchyRow], partitions: &[SamplePartition]) -> CliResult<Option<String>> {
    for i in 1..rows.len() {
        let (coarse, fine) = (&rows[i - 1], &rows[i]);
        if !is_finer(&partitions[i], &partitions[i - 1])? {
            return Ok(Some(format!("{} does not refine {}", fine.coloring, coarse.coloring)));
        }
        if fine.p < coarse.p || fine.exact + TOL < coarse.exact {
            return Ok(Some(format!(
                "{} -> {}: p {} -> {}, exact {} -> {}",
                coarse.coloring, fine.coloring, coarse.p, fine.p, coarse.exact, fine.exact
            )));
        }
    }
    Ok(None)
}

pub fn hierarchy(args: &HierarchyArgs) -> CliResult<Outcome<HierarchyReport>> {
    let loaded = load_sample(&args.input)?;
    let sample = &loaded.sample;
    let (rows, partitions, mut notes) = hierarchy_rows(sample)?;
    if sample.has_attributes() {
        notes.push("sample carries node attributes; trivial coloring ignores them".into());
    }
    notes.extend(loaded.warnings);
    let violation = check_chain(&rows, &partitions)?;
    if let Some(path) = &args.svg {
        let markers: Vec<_> = rows.iter().map(|r| (r.coloring.to_string(), r.p, r.exact)).collect();
        write_file(path, &svg::bound_chart(sample.len(), &markers))?;
    }
    Ok(Outcome {
        report: HierarchyReport {
            schema_version: SCHEMA_VERSION,
            command: "hierarchy",
            m: sample.len(),
            rows,
            chain_holds: violation.is_none(),
            notes,
        },
        violation,
    })
}

#[derive(Debug, Serialize)]
pub struct GenBoundReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub coloring: ColoringKind,
    pub m: usize,
    pub p: usize,
    pub loss: LossSpec,
    pub empirical_risk: f64,
    pub gamma: f64,
    pub rademacher: f64,
    pub delta: f64,
    pub confidence_slack: f64,
    pub bound: f64,
    pub notes: Vec<String>,
}

impl Report for GenBoundReport {
    fn rows(&self) -> Vec<BoundRow> {
        let inputs = format!("m={};p={};delta={}", self.m, self.p, self.delta);
        vec![
            row("empirical_risk", self.empirical_risk, inputs.clone(), ""),
            row("gamma", self.gamma, format!("z_bound={}", self.loss.z_bound()), format!("{:?}", self.loss.kind)),
            row("rademacher", self.rademacher, inputs.clone(), "exact"),
            row("confidence_slack", self.confidence_slack, inputs.clone(), ""),
            row("generalization_bound", self.bound, inputs, if self.bound > 1.0 { "vacuous for 0-1 risk" } else { "" }),
        ]
    }
}

/// Fraction of graphs whose label disagrees in sign with the prediction for
/// their class. `predictions` holds one non-zero value per class.
pub fn misclassification(
    partition: &SamplePartition,
    labels: &[colorbound::graph::Label],
    predictions: &[f64],
) -> CliResult<f64> {
    if predictions.len() != partition.p() {
        return Err(CliError::Parse(format!(
            "{} predictions for {} classes",
            predictions.len(),
            partition.p()
        )));
    }
    let mut wrong = 0usize;
    for (class, &pred) in partition.classes().iter().zip(predictions) {
        if pred == 0.0 || !pred.is_finite() {
            return Err(CliError::Parse(format!("prediction {pred} has no sign")));
        }
        let predicted = if pred > 0.0 { 1 } else { -1 };
        wrong += class.members.iter().filter(|&&i| labels[i].sign() != predicted).count();
    }
    Ok(wrong as f64 / partition.m() as f64)
}

fn read_predictions(path: &Path) -> CliResult<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("{}:{}: invalid prediction {l:?}", path.display(), i + 1)))
        })
        .collect()
}

pub fn gen_bound(args: &GenBoundArgs) -> CliResult<Outcome<GenBoundReport>> {
    let loaded = load_sample(&args.input)?;
    let sample = &loaded.sample;
    let Some(labels) = sample.labels() else {
        return Err(CliError::MissingLabels(format!(
            "{} carries no binary graph labels",
            args.input.display()
        )));
    };
    let kind = ColoringKind::from(args.coloring);
    let (histograms, _) = color_sample(kind, sample)?;
    let partition = partition_sample(&histograms);
    let empirical_risk = match (&args.empirical_risk, &args.predictions) {
        (Some(r), _) => *r,
        (None, Some(path)) => misclassification(&partition, labels, &read_predictions(path)?)?,
        (None, None) => {
            return Err(CliError::Parse(
                "supply --empirical-risk or --predictions".into(),
            ))
        }
    };
    let loss = LossSpec {
        kind: args.loss.into(),
        b_phi: args.b_phi,
        b_beta: args.b_beta,
        a: args.a,
        b: args.b,
        c: args.c,
        margin: args.margin,
    };
    let gamma = loss.lipschitz_constant()?;
    let rademacher = exact_rademacher(&partition).value;
    let inputs = GenBoundInputs {
        empirical_risk,
        gamma,
        rademacher,
        delta: args.delta,
        m: partition.m(),
    };
    let bound = generalization_bound(&inputs)?;
    let mut notes = loaded.warnings;
    if bound > 1.0 {
        notes.push(format!("bound {bound:.6} exceeds 1"));
    }
    Ok(Outcome::ok(GenBoundReport {
        schema_version: SCHEMA_VERSION,
        command: "gen-bound",
        coloring: kind,
        m: partition.m(),
        p: partition.p(),
        loss,
        empirical_risk,
        gamma,
        rademacher,
        delta: args.delta,
        confidence_slack: confidence_slack(args.delta, partition.m()),
        bound,
        notes,
    }))
}

pub fn synth_spec(args: &SynthArgs) -> RandomSampleSpec {
    let family = match args.family {
        FamilyArg::ErdosRenyi => GraphFamily::ErdosRenyi {
            n: args.n,
            edge_probability: args.edge_probability,
        },
        FamilyArg::DRegular => GraphFamily::DRegular {
            n: args.n,
            degree: args.degree,
        },
        FamilyArg::Cycle => GraphFamily::Cycle { n: args.n },
        FamilyArg::DisjointCycles => GraphFamily::DisjointCycles {
            lengths: args.lengths.clone(),
        },
    };
    RandomSampleSpec {
        family,
        count: args.count,
        seed: args.seed,
    }
}

/// Generates the sample and returns it as JSONL text, also writing it to
/// `args.output` when set.
pub fn synth(args: &SynthArgs) -> CliResult<String> {
    let sample = generate_sample(&synth_spec(args))?;
    let text = to_jsonl(&sample);
    if let Some(path) = &args.output {
        write_file(path, &text)?;
    }
    Ok(text)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}
