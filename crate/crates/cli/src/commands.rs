use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use elastic_boxplot::boxplot::DEFAULT_K_TRANSLATION;
use elastic_boxplot::simulation::{run_table, SimulationConfig};
use elastic_boxplot::{
    amplitude_boxplot, decompose, outlier_scan, phase_boxplot, surface_display,
    translation_boxplot, BoxplotOptions, Decomposition, SeverityEntry,
};

use crate::dataset::Dataset;
use crate::error::{exit, CliError};
use crate::mesh::Mesh;
use crate::report::{
    AmplitudeSummary, Boxplots, DecompositionData, InputInfo, PhaseSummary, Report, ScatterRow,
};
use crate::svg::{self, Curves};
use crate::{
    BoxplotArgs, BoxplotParams, Cli, Command, DecomposeArgs, InputArgs, OutliersArgs, SimulateArgs,
};

/// Runs one command, writing tables and stdout reports to `out`. Returns the
/// process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Decompose(a) => cmd_decompose(&a, out),
        Command::Boxplot(a) => cmd_boxplot(&a, out),
        Command::Outliers(a) => cmd_outliers(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))
}

fn emit(out: &mut dyn Write, content: &str) -> Result<(), CliError> {
    out.write_all(content.as_bytes())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn is_report(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Loads a CSV (and decomposes it) or a saved report.
fn load(args: &InputArgs) -> Result<(Report, Decomposition), CliError> {
    let path = &args.input;
    if is_report(path) {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut report = Report::from_json(&text)?;
        let dec = report.decomposition.to_decomposition()?;
        report.boxplots = None;
        report.surfaces.clear();
        report.severity = None;
        report.scatter = None;
        report.warnings.clear();
        check_convergence(&dec, &mut report.warnings);
        return Ok((report, dec));
    }
    let data = Dataset::from_path(path)?;
    let fs = data.to_functions(args.grid, args.resample)?;
    log::info!("decomposing {} functions on {} points", fs.len(), args.grid);
    let dec = decompose(&fs).map_err(|e| match e {
        elastic_boxplot::Error::NonFinite(_) | elastic_boxplot::Error::TooFewSamples { .. } => CliError::input_from(e),
        e => CliError::Compute(e),
    })?;
    let mut warnings = Vec::new();
    check_convergence(&dec, &mut warnings);
    let report = Report {
        input: InputInfo {
            source: path.display().to_string(),
            names: data.names.clone(),
            time_span: data.time_span(),
            resample: args.resample,
        },
        decomposition: DecompositionData::from_decomposition(&dec),
        boxplots: None,
        surfaces: Vec::new(),
        severity: None,
        scatter: None,
        warnings,
    };
    Ok((report, dec))
}

fn check_convergence(dec: &Decomposition, warnings: &mut Vec<String>) {
    let d = dec.diagnostics;
    if !d.amplitude_converged {
        warnings.push(format!("amplitude median stopped after {} iterations without converging", d.amplitude_iterations));
    }
    if !d.phase_converged {
        warnings.push(format!("phase median stopped after {} iterations without converging", d.phase_iterations));
    }
}

fn finish(report: &Report) -> u8 {
    for w in &report.warnings {
        log::warn!("{w}");
    }
    if report.decomposition.diagnostics.amplitude_converged && report.decomposition.diagnostics.phase_converged {
        exit::OK
    } else {
        exit::NONCONVERGENCE
    }
}

fn options(p: &BoxplotParams, k: f64) -> BoxplotOptions {
    BoxplotOptions {
        k,
        lambda: p.lambda,
        rule: p.rule.into(),
    }
}

fn validate_params(p: &BoxplotParams) -> Result<(), CliError> {
    for k in [p.ka, p.kp] {
        options(p, k).validate().map_err(CliError::input_from)?;
    }
    Ok(())
}

fn cmd_decompose(a: &DecomposeArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let (report, _) = load(&a.input)?;
    match &a.output {
        Some(path) => {
            write_file(path, &report.to_json())?;
            emit(out, &distance_table(&report))?;
        }
        None => emit(out, &report.to_json())?,
    }
    Ok(finish(&report))
}

fn distance_table(r: &Report) -> String {
    let d = &r.decomposition;
    let mut s = format!("{:>5}  {:<16}{:>14}{:>12}{:>12}\n", "index", "name", "translation", "D_a", "D_p");
    for i in 0..d.translations.len() {
        let _ = writeln!(
            s,
            "{i:>5}  {:<16}{:>14.6}{:>12.6}{:>12.6}",
            r.input.names.get(i).map_or("", String::as_str),
            d.translations[i],
            d.amp_distances[i],
            d.phase_distances[i]
        );
    }
    s
}

fn build_boxplots(report: &mut Report, dec: &Decomposition, p: &BoxplotParams) -> Result<(), CliError> {
    let amp = amplitude_boxplot(dec, &options(p, p.ka))?;
    let phase = phase_boxplot(dec, &options(p, p.kp))?;
    let translation = translation_boxplot(&dec.translations, DEFAULT_K_TRANSLATION)?;
    report.surfaces.clear();
    if amp.degenerate {
        report.warnings.push("amplitude boxplot is degenerate; only the median is drawn".into());
    } else {
        report.surfaces.push(surface_display(&amp, dec)?);
    }
    if phase.degenerate {
        report.warnings.push("phase boxplot is degenerate; only the median is drawn".into());
    } else {
        report.surfaces.push(surface_display(&phase, dec)?);
    }
    if phase.clamped {
        report.warnings.push("phase cutoff clamped below the cut locus; k_p is too large for this data".into());
    }
    report.boxplots = Some(Boxplots {
        amplitude: AmplitudeSummary::new(&amp, dec)?,
        phase: PhaseSummary::new(&phase, dec),
        translation,
    });
    Ok(())
}

fn write_svgs(dir: &Path, report: &Report) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let b = report.boxplots.as_ref().expect("boxplots built");
    let d = &report.decomposition;
    let sample = |rows: &'_ [Vec<f64>], i: Option<usize>| i.map(|i| rows[i].clone());

    let (a, p) = (&b.amplitude, &b.phase);
    let amp_curves = [
        sample(&d.amplitudes, a.extreme1_index),
        a.q1.clone(),
        a.q3.clone(),
        sample(&d.amplitudes, a.extreme3_index),
    ];
    let curves = Curves {
        extreme1: amp_curves[0].as_deref(),
        q1: amp_curves[1].as_deref(),
        median: Some(&a.median),
        q3: amp_curves[2].as_deref(),
        extreme3: amp_curves[3].as_deref(),
    };
    let svg_text = svg::render(
        &format!("Amplitude boxplot (k_a = {}, lambda = {})", a.k_a, a.lambda),
        &d.grid,
        report.input.time_span,
        &curves,
    );
    write_file(&dir.join("amplitude.svg"), &svg_text)?;

    let phase_curves = [
        sample(&d.phases, p.extreme1_index),
        p.q1.clone(),
        p.q3.clone(),
        sample(&d.phases, p.extreme3_index),
    ];
    let curves = Curves {
        extreme1: phase_curves[0].as_deref(),
        q1: phase_curves[1].as_deref(),
        median: Some(&p.median),
        q3: phase_curves[2].as_deref(),
        extreme3: phase_curves[3].as_deref(),
    };
    let svg_text = svg::render(
        &format!("Phase boxplot (k_p = {}, lambda = {})", p.k_p, p.lambda),
        &d.grid,
        [0.0, 1.0],
        &curves,
    );
    write_file(&dir.join("phase.svg"), &svg_text)
}

fn write_meshes(dir: &Path, report: &Report) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for s in &report.surfaces {
        let mesh = Mesh::new(s, &report.decomposition.grid);
        let mut text = serde_json::to_string_pretty(&mesh).expect("mesh serializes");
        text.push('\n');
        write_file(&dir.join(mesh.file_name()), &text)?;
    }
    Ok(())
}

fn cmd_boxplot(a: &BoxplotArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    validate_params(&a.params)?;
    let (mut report, dec) = load(&a.input)?;
    build_boxplots(&mut report, &dec, &a.params)?;
    if let Some(dir) = &a.svg {
        write_svgs(dir, &report)?;
    }
    if let Some(dir) = &a.mesh {
        write_meshes(dir, &report)?;
    }
    match &a.output {
        Some(path) => {
            write_file(path, &report.to_json())?;
            emit(out, &boxplot_summary(&report))?;
        }
        None => emit(out, &report.to_json())?,
    }
    Ok(finish(&report))
}

fn boxplot_summary(r: &Report) -> String {
    let b = r.boxplots.as_ref().expect("boxplots built");
    let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    let mut s = String::new();
    let _ = writeln!(
        s,
        "amplitude  k_a={}  Q1={:?} Q3={:?}  IQR={:.6}  threshold={:.6}  outliers=[{}]",
        b.amplitude.k_a,
        b.amplitude.q1_index,
        b.amplitude.q3_index,
        b.amplitude.iqr,
        b.amplitude.threshold,
        list(&b.amplitude.outlier_indices)
    );
    let _ = writeln!(
        s,
        "phase      k_p={}  Q1={:?} Q3={:?}  IQR={:.6}  threshold={:.6}  outliers=[{}]",
        b.phase.k_p,
        b.phase.q1_index,
        b.phase.q3_index,
        b.phase.iqr,
        b.phase.threshold,
        list(&b.phase.outlier_indices)
    );
    let _ = writeln!(
        s,
        "translation  median={:.6}  Q1={:.6} Q3={:.6}  outliers=[{}]",
        b.translation.median,
        b.translation.q1,
        b.translation.q3,
        list(&b.translation.outlier_indices)
    );
    s
}

fn cmd_outliers(a: &OutliersArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    validate_params(&a.params)?;
    for &k in a.ka_grid.iter().chain(&a.kp_grid) {
        options(&a.params, k).validate().map_err(CliError::input_from)?;
    }
    let (mut report, dec) = load(&a.input)?;
    build_boxplots(&mut report, &dec, &a.params)?;
    let rule = a.params.rule.into();
    let severity = outlier_scan(&dec, &a.ka_grid, &a.kp_grid, a.params.lambda, rule)?;
    let translation_flags = &report.boxplots.as_ref().expect("boxplots built").translation.outlier_indices;
    let lookup = |entries: &[SeverityEntry], i: usize| entries.iter().find(|e| e.index == i).map(|e| e.severity);
    let scatter: Vec<ScatterRow> = (0..dec.len())
        .map(|i| ScatterRow {
            index: i,
            name: report.input.names.get(i).cloned().unwrap_or_default(),
            phase_distance: dec.phase_distances[i],
            amplitude_distance: dec.amp_distances[i],
            translation: dec.translations[i],
            amplitude_severity: lookup(&severity.amplitude, i),
            phase_severity: lookup(&severity.phase, i),
            translation_outlier: translation_flags.contains(&i),
        })
        .collect();

    let mut text = scatter_table(&scatter);
    if a.scan {
        text.push('\n');
        for (label, grid, amp) in [("k_a", &a.ka_grid, true), ("k_p", &a.kp_grid, false)] {
            for &k in grid.iter() {
                let o = options(&a.params, k);
                let flagged = if amp {
                    amplitude_boxplot(&dec, &o)?.outlier_indices
                } else {
                    phase_boxplot(&dec, &o)?.outlier_indices
                };
                let list: Vec<String> = flagged.iter().map(|i| i.to_string()).collect();
                let _ = writeln!(text, "{label} = {k:<5} flagged: [{}]", list.join(","));
            }
        }
    }
    report.severity = Some(severity);
    report.scatter = Some(scatter);
    emit(out, &text)?;
    if let Some(path) = &a.json {
        write_file(path, &report.to_json())?;
    }
    Ok(finish(&report))
}

fn scatter_table(rows: &[ScatterRow]) -> String {
    let label = |s: Option<elastic_boxplot::Severity>| s.map_or("-".to_string(), |s| s.to_string());
    let mut s = format!(
        "{:>5}  {:<16}{:>12}{:>12}{:>14}  {:<10}{:<10}{}\n",
        "index", "name", "D_p", "D_a", "translation", "amplitude", "phase", "translation_outlier"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>5}  {:<16}{:>12.6}{:>12.6}{:>14.6}  {:<10}{:<10}{}",
            r.index,
            r.name,
            r.phase_distance,
            r.amplitude_distance,
            r.translation,
            label(r.amplitude_severity),
            label(r.phase_severity),
            if r.translation_outlier { "yes" } else { "no" }
        );
    }
    s
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut config = SimulationConfig::new(a.sim, a.seed);
    config.n_replicates = a.replicates;
    config.n_functions = a.functions;
    config.grid_size = a.grid;
    config.lambda = a.lambda;
    config.rule = a.rule.into();
    config.parallel = true;
    if let Some(g) = &a.ka_grid {
        config.k_a_grid = g.clone();
    }
    if let Some(g) = &a.kp_grid {
        config.k_p_grid = g.clone();
    }
    config.validate().map_err(CliError::input_from)?;
    let report = run_table(&config)?;
    emit(out, &report.to_table())?;
    if let Some(path) = &a.json {
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        write_file(path, &text)?;
    }
    if report.nonconverged_replicates > 0 {
        log::warn!("{} replicate(s) had a median hit its iteration cap", report.nonconverged_replicates);
    }
    if report.exceeds_failure_budget() {
        log::error!(
            "{} of {} replicates failed, above the {:.0}% budget",
            report.failures.len(),
            report.n_replicates,
            100.0 * elastic_boxplot::simulation::FAILURE_BUDGET
        );
        return Ok(exit::FAILURE_BUDGET);
    }
    Ok(exit::OK)
}
