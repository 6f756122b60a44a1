//! Command-line front end: scenario configuration, figure-data regeneration,
//! machine-readable CSV/JSON output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod scenario;
mod table;

use std::io::Write;
use std::path::PathBuf;

use chain_lambda::{
    absorption_surface, build_hamiltonian, build_liouvillian, dark_state_analytic,
    dark_state_numeric, dispersion_analytic, dispersion_master, dispersion_maximum,
    dispersion_numeric, nearest_zero_eigenpair, normalize, steady_state, susceptibility_from_rho,
    sweep_dispersion, ChainConfig64, CouplingMode, Detunings64, Error,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use scenario::{CouplingModeArg, Scenario};
use table::{Cell, Format, Table};

/// Error carrying the process exit code: 2 for usage problems, 3 for
/// numeric/runtime failures.
#[derive(Debug)]
pub struct CliError {
    message: String,
    code: i32,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::UnsupportedChainLength(..) | Error::UnsupportedMode(_) => {
                Self::usage(e.to_string())
            }
            _ => Self::numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::numeric(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "chain-lambda",
    version,
    about = "Dark states, EIT susceptibility, intensity-dependent dispersion and group \
             velocity of chain-Lambda multistate atoms",
    after_help = "All frequencies on the command line are in units of Gamma; SI units enter \
                  through --gamma-hz, --density, --dipole and --wavelength."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct PhysicsFlags {
    /// Number of atomic states (odd: 3, 5, 7, 9, ...)
    #[arg(long)]
    states: Option<usize>,
    /// Probe Rabi frequency P1 in units of Gamma
    #[arg(long)]
    probe: Option<f64>,
    /// Coupling Rabi frequency C1 in units of Gamma
    #[arg(long)]
    coupling: Option<f64>,
    /// Probe detuning in units of Gamma
    #[arg(long)]
    probe_detuning: Option<f64>,
    /// Coupling detuning in units of Gamma
    #[arg(long)]
    coupling_detuning: Option<f64>,
    /// Linewidth Gamma/(2 pi) in Hz
    #[arg(long)]
    gamma_hz: Option<f64>,
    /// m-photon dephasing rates in units of Gamma, comma-separated (m = 2, 3, ...)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    dephasing: Option<Vec<f64>>,
    /// Atomic density in m^-3
    #[arg(long)]
    density: Option<f64>,
    /// Dipole moment of the first probe transition in C m
    #[arg(long)]
    dipole: Option<f64>,
    /// Probe vacuum wavelength in m
    #[arg(long)]
    wavelength: Option<f64>,
    /// Scale couplings by the Zeeman transition-strength ratios
    #[arg(long)]
    clebsch_gordan: bool,
    /// Use the element-wise 5-state loss-rate lists instead of jump operators
    #[arg(long)]
    paper_faithful: bool,
}

impl PhysicsFlags {
    fn apply(&self, s: &mut Scenario) {
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { s.$field = v; } )* };
        }
        set!(
            states,
            probe,
            coupling,
            probe_detuning,
            coupling_detuning,
            gamma_hz
        );
        if let Some(v) = self.dephasing.clone() {
            s.dephasing = v;
        }
        if let Some(v) = self.density {
            s.atomic_density = v;
        }
        if let Some(v) = self.dipole {
            s.dipole_moment = v;
        }
        if let Some(v) = self.wavelength {
            s.probe_wavelength = v;
        }
        if self.clebsch_gordan {
            s.coupling_mode = CouplingModeArg::ClebschGordan;
        }
        if self.paper_faithful {
            s.lindblad_mode = scenario::LindbladModeArg::PaperFaithful;
        }
    }
}

#[derive(Args, Debug, Default)]
struct GridFlags {
    /// Probe grid start, P1/Gamma
    #[arg(long)]
    probe_min: Option<f64>,
    /// Probe grid end, P1/Gamma
    #[arg(long)]
    probe_max: Option<f64>,
    /// Probe grid size
    #[arg(long)]
    probe_points: Option<usize>,
    /// Detuning grid start, Delta_p/Gamma
    #[arg(long)]
    detuning_min: Option<f64>,
    /// Detuning grid end, Delta_p/Gamma
    #[arg(long)]
    detuning_max: Option<f64>,
    /// Detuning grid size
    #[arg(long)]
    detuning_points: Option<usize>,
}

impl GridFlags {
    fn apply(&self, s: &mut Scenario) {
        if let Some(v) = self.probe_min {
            s.probe_grid.min = v;
        }
        if let Some(v) = self.probe_max {
            s.probe_grid.max = v;
        }
        if let Some(v) = self.probe_points {
            s.probe_grid.points = v;
        }
        if let Some(v) = self.detuning_min {
            s.detuning_grid.min = v;
        }
        if let Some(v) = self.detuning_max {
            s.detuning_grid.max = v;
        }
        if let Some(v) = self.detuning_points {
            s.detuning_grid.points = v;
        }
    }
}

#[derive(Args, Debug, Default)]
struct OutputFlags {
    /// JSON scenario file; command-line flags override its fields
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Closed forms (3-, 5-, 7-state atoms, equal couplings)
    Analytic,
    /// Finite difference through the numeric dark state
    Numeric,
    /// Finite difference through full master-equation steady states
    Master,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureId {
    /// R Gamma^2 vs P/Gamma for 3-, 5-, 7-, 9-state atoms
    Fig3,
    /// analytic vs master-equation dispersion, 5-state atom
    Fig4,
    /// log10 group velocity vs P/Gamma for 3-, 5-, 7-, 9-state atoms
    Fig5,
    /// dispersion with Zeeman coupling ratios, 5- and 7-state atoms
    Fig6,
    /// absorption surface -Im chi over (Delta_p, P), 5-state atom
    Fig7,
}

#[derive(Subcommand)]
enum Command {
    /// Print the chain Hamiltonian over hbar, in units of Gamma
    Hamiltonian {
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Dark-state coefficients, numeric and (where available) closed-form
    Darkstate {
        /// Probe detuning in units of Gamma (coupling field resonant)
        #[arg(long)]
        detuning: Option<f64>,
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Intensity-dependent dispersion over a probe grid
    Dispersion {
        #[arg(long, value_enum, default_value_t = Method::Numeric)]
        method: Method,
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        grid: GridFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Probe-to-coupling ratio maximizing the dispersion
    Beta {
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Group velocity over a probe grid
    Groupvelocity {
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        grid: GridFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Steady-state density matrix and susceptibility
    Steadystate {
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Steady-state absorption -Im chi over (detuning, probe) grids
    Surface {
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        grid: GridFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Regenerate the data behind one of the stock figures
    Figure {
        #[arg(value_enum)]
        which: FigureId,
        #[command(flatten)]
        physics: PhysicsFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
}

fn main() {
    env_logger::Builder::from_default_env()
        .filter_level(log::LevelFilter::Warn)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn resolve(
    output: &OutputFlags,
    physics: &PhysicsFlags,
    grid: Option<&GridFlags>,
) -> Result<Scenario, CliError> {
    let mut s = match &output.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    physics.apply(&mut s);
    if let Some(g) = grid {
        g.apply(&mut s);
    }
    if let Some(f) = output.format {
        s.format = f;
    }
    s.check()?;
    Ok(s)
}

fn emit(table: &Table, s: &Scenario, output: &OutputFlags) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .map_err(|e| CliError::usage(format!("cannot create {}: {e}", path.display())))?;
            table.write(s.format, &mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(s.format, &mut lock)?;
        }
    }
    Ok(())
}

fn state_label(i: usize) -> String {
    if i.is_multiple_of(2) {
        format!("g{}", i / 2 + 1)
    } else {
        format!("e{}", i / 2 + 1)
    }
}

fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Hamiltonian { physics, output } => {
            let s = resolve(&output, &physics, None)?;
            let cfg = s.config_in(1.0)?;
            let h = build_hamiltonian(&cfg, &s.detunings_in(1.0));
            let d = h.dim();
            let labels: Vec<String> = (0..d).map(state_label).collect();
            let mut columns = vec!["state".to_string()];
            columns.extend(labels.iter().cloned());
            let col_refs: Vec<&str> = columns.iter().map(|c| c.as_str()).collect();
            let mut table = Table::new(&col_refs);
            s.describe(&mut table);
            table.meta("command", "hamiltonian");
            for (i, label) in labels.iter().enumerate() {
                let mut row: Vec<Cell> = vec![label.as_str().into()];
                row.extend((0..d).map(|j| Cell::from(h.get(i, j))));
                table.row(row);
            }
            emit(&table, &s, &output)
        }

        Command::Darkstate {
            detuning,
            physics,
            output,
        } => {
            let mut s = resolve(&output, &physics, None)?;
            if let Some(dp) = detuning {
                s.probe_detuning = dp;
            }
            s.coupling_detuning = 0.0;
            let cfg = s.config_in(1.0)?;
            let h = build_hamiltonian(&cfg, &s.detunings_in(1.0));
            let numeric = dark_state_numeric(&h);
            let analytic = if s.coupling_mode == CouplingModeArg::EqualCouplings {
                dark_state_analytic(s.n_ground(), s.probe, s.coupling, s.probe_detuning)
                    .and_then(|a| normalize(&a))
                    .map(|a| a.aligned_with(&numeric))
                    .ok()
            } else {
                None
            };
            let columns: Vec<&str> = if analytic.is_some() {
                vec!["state", "alpha_numeric", "alpha_analytic"]
            } else {
                vec!["state", "alpha_numeric"]
            };
            let mut table = Table::new(&columns);
            s.describe(&mut table);
            table.meta("command", "darkstate");
            let (lambda, _) = nearest_zero_eigenpair(&h);
            table.meta("dark_eigenvalue_over_gamma", format!("{lambda:e}"));
            for (i, v) in numeric.alpha().iter().enumerate() {
                let mut row: Vec<Cell> = vec![state_label(i).as_str().into(), (*v).into()];
                if let Some(a) = &analytic {
                    row.push(a.alpha()[i].into());
                }
                table.row(row);
            }
            emit(&table, &s, &output)
        }

        Command::Dispersion {
            method,
            physics,
            grid,
            output,
        } => {
            let s = resolve(&output, &physics, Some(&grid))?;
            let p_grid = s.probe_grid.values()?;
            let mut table;
            match method {
                Method::Analytic => {
                    if s.coupling_mode != CouplingModeArg::EqualCouplings {
                        return Err(CliError::usage(
                            "closed-form dispersion assumes equal couplings; drop --clebsch-gordan",
                        ));
                    }
                    table = Table::new(&["p_over_gamma", "r_gamma_sq"]);
                    s.describe(&mut table);
                    table.meta("command", "dispersion");
                    table.meta("method", "analytic");
                    for &p in &p_grid {
                        let r = dispersion_analytic(s.n_ground(), p, s.coupling)?;
                        table.row(vec![p.into(), r.r_gamma_sq.into()]);
                    }
                }
                Method::Numeric => {
                    let gamma = s.gamma_si();
                    let cfg = s.config_si()?;
                    let grid_si: Vec<f64> = p_grid.iter().map(|p| p * gamma).collect();
                    let rows = sweep_dispersion(&cfg, &grid_si, s.coupling_mode())?;
                    table = Table::new(&["p_over_gamma", "r_gamma_sq", "v_g"]);
                    s.describe(&mut table);
                    table.meta("command", "dispersion");
                    table.meta("method", "numeric");
                    for row in rows {
                        table.row(vec![
                            row.p_over_gamma.into(),
                            row.r_gamma_sq.into(),
                            row.v_g.into(),
                        ]);
                    }
                }
                Method::Master => {
                    if s.coupling_mode != CouplingModeArg::EqualCouplings {
                        return Err(CliError::usage(
                            "master-equation dispersion assumes equal couplings",
                        ));
                    }
                    if s.lindblad_mode == scenario::LindbladModeArg::PaperFaithful {
                        return Err(CliError::usage(
                            "master-equation dispersion uses the canonical loss model",
                        ));
                    }
                    let cfg = s.config_in(1.0)?;
                    table = Table::new(&["p_over_gamma", "r_gamma_sq"]);
                    s.describe(&mut table);
                    table.meta("command", "dispersion");
                    table.meta("method", "master");
                    for &p in &p_grid {
                        let r = dispersion_master(&cfg, p, s.coupling, 1e-3)?;
                        table.row(vec![p.into(), r.r_gamma_sq.into()]);
                    }
                }
            }
            emit(&table, &s, &output)
        }

        Command::Beta { physics, output } => {
            let s = resolve(&output, &physics, None)?;
            let (beta, r_max) = dispersion_maximum(s.n_ground(), s.coupling)?;
            let mut table = Table::new(&["states", "beta", "r_max_gamma_sq"]);
            s.describe(&mut table);
            table.meta("command", "beta");
            table.row(vec![(s.states as f64).into(), beta.into(), r_max.into()]);
            emit(&table, &s, &output)
        }

        Command::Groupvelocity {
            physics,
            grid,
            output,
        } => {
            let s = resolve(&output, &physics, Some(&grid))?;
            let gamma = s.gamma_si();
            let cfg = s.config_si()?;
            let grid_si: Vec<f64> = s.probe_grid.values()?.iter().map(|p| p * gamma).collect();
            let rows = sweep_dispersion(&cfg, &grid_si, s.coupling_mode())?;
            let mut table = Table::new(&["p_over_gamma", "v_g", "log10_v_g"]);
            s.describe(&mut table);
            table.meta("command", "groupvelocity");
            for row in rows {
                table.row(vec![
                    row.p_over_gamma.into(),
                    row.v_g.into(),
                    row.v_g.log10().into(),
                ]);
            }
            emit(&table, &s, &output)
        }

        Command::Steadystate { physics, output } => {
            let s = resolve(&output, &physics, None)?;
            let gamma = s.gamma_si();
            let cfg = s.config_si()?;
            let l = build_liouvillian(&cfg, &s.detunings_in(gamma), s.lindblad_mode())?;
            let rho = steady_state(&l)?;
            let chi = susceptibility_from_rho(&cfg, &rho)?;
            let mut table = Table::new(&["bra", "ket", "re", "im"]);
            s.describe(&mut table);
            table.meta("command", "steadystate");
            table.meta("chi_re", chi.value.re);
            table.meta("chi_im", chi.value.im);
            table.meta("minus_im_chi", -chi.value.im);
            let d = rho.dim();
            for a in 0..d {
                for b in 0..d {
                    let z = rho.entry(a, b);
                    table.row(vec![
                        state_label(a).as_str().into(),
                        state_label(b).as_str().into(),
                        z.re.into(),
                        z.im.into(),
                    ]);
                }
            }
            emit(&table, &s, &output)
        }

        Command::Surface {
            physics,
            grid,
            output,
        } => {
            let s = resolve(&output, &physics, Some(&grid))?;
            if s.lindblad_mode == scenario::LindbladModeArg::PaperFaithful {
                return Err(CliError::usage(
                    "the absorption surface uses the canonical loss model",
                ));
            }
            let gamma = s.gamma_si();
            let cfg = s.config_si()?;
            let dp_grid: Vec<f64> = s
                .detuning_grid
                .values()?
                .iter()
                .map(|x| x * gamma)
                .collect();
            let p_grid: Vec<f64> = s.probe_grid.values()?.iter().map(|x| x * gamma).collect();
            let rows = absorption_surface(&cfg, &dp_grid, &p_grid)?;
            let mut table = Table::new(&["delta_p_over_gamma", "p_over_gamma", "minus_im_chi"]);
            s.describe(&mut table);
            table.meta("command", "surface");
            for r in rows {
                table.row(vec![
                    r.delta_p_over_gamma.into(),
                    r.p_over_gamma.into(),
                    r.minus_im_chi.into(),
                ]);
            }
            emit(&table, &s, &output)
        }

        Command::Figure {
            which,
            physics,
            output,
        } => {
            let s = resolve(&output, &physics, None)?;
            let table = figure(which, &s)?;
            emit(&table, &s, &output)
        }
    }
}

fn figure(which: FigureId, s: &Scenario) -> Result<Table, CliError> {
    let c = s.coupling;
    let gamma = s.gamma_si();
    match which {
        FigureId::Fig3 => {
            let mut table = Table::new(&[
                "P_over_gamma",
                "R_gamma_sq_3",
                "R_gamma_sq_5",
                "R_gamma_sq_7",
                "R_gamma_sq_9",
            ]);
            s.describe(&mut table);
            table.meta("command", "figure fig3");
            table.meta("figure_states", "3 5 7 9");
            for p in linspace(0.05, 2.0, 40) {
                let mut row: Vec<Cell> = vec![p.into()];
                for n_ground in [2usize, 3, 4] {
                    row.push(dispersion_analytic(n_ground, p, c)?.r_gamma_sq.into());
                }
                let cfg = ChainConfig64::equal_couplings(5, p, c, 1.0)?;
                let step = (1e-4f64).min(0.05 * p.min(c));
                row.push(
                    dispersion_numeric(&cfg, &Detunings64::resonant(), step)?
                        .r_gamma_sq
                        .into(),
                );
                table.row(row);
            }
            Ok(table)
        }
        FigureId::Fig4 => {
            let mut table =
                Table::new(&["P_over_gamma", "R_gamma_sq_analytic", "R_gamma_sq_master"]);
            s.describe(&mut table);
            table.meta("command", "figure fig4");
            table.meta("figure_states", "5");
            let cfg = ChainConfig64::equal_couplings(3, c, c, 1.0)?;
            for p in linspace(0.1, 1.0, 19) {
                let ana = dispersion_analytic(3, p, c)?;
                let master = dispersion_master(&cfg, p, c, 1e-3)?;
                table.row(vec![
                    p.into(),
                    ana.r_gamma_sq.into(),
                    master.r_gamma_sq.into(),
                ]);
            }
            Ok(table)
        }
        FigureId::Fig5 => {
            let mut table = Table::new(&[
                "P_over_gamma",
                "log10_vg_3",
                "log10_vg_5",
                "log10_vg_7",
                "log10_vg_9",
            ]);
            s.describe(&mut table);
            table.meta("command", "figure fig5");
            table.meta("figure_states", "3 5 7 9");
            let grid: Vec<f64> = linspace(0.05, 2.0, 40).iter().map(|p| p * gamma).collect();
            let mut columns = Vec::new();
            for n_ground in [2usize, 3, 4, 5] {
                let mut scen = s.clone();
                scen.states = 2 * n_ground - 1;
                scen.coupling_mode = CouplingModeArg::EqualCouplings;
                let cfg = scen.config_si()?;
                let rows = sweep_dispersion(&cfg, &grid, CouplingMode::EqualCouplings)?;
                columns.push(rows);
            }
            for i in 0..columns[0].len() {
                let mut row: Vec<Cell> = vec![columns[0][i].p_over_gamma.into()];
                for col in &columns {
                    row.push(col[i].v_g.log10().into());
                }
                table.row(row);
            }
            Ok(table)
        }
        FigureId::Fig6 => {
            let mut table = Table::new(&["P1_over_gamma", "R_gamma_sq_5", "R_gamma_sq_7"]);
            s.describe(&mut table);
            table.meta("command", "figure fig6");
            table.meta("figure_states", "5 7");
            table.meta("figure_coupling_mode", "clebsch-gordan");
            let grid: Vec<f64> = linspace(0.05, 2.0, 40).iter().map(|p| p * gamma).collect();
            let mut columns = Vec::new();
            for n_ground in [3usize, 4] {
                let mut scen = s.clone();
                scen.states = 2 * n_ground - 1;
                scen.coupling_mode = CouplingModeArg::ClebschGordan;
                let cfg = scen.config_si()?;
                let rows = sweep_dispersion(&cfg, &grid, CouplingMode::ClebschGordan)?;
                columns.push(rows);
            }
            for (five, seven) in columns[0].iter().zip(&columns[1]) {
                table.row(vec![
                    five.p_over_gamma.into(),
                    five.r_gamma_sq.into(),
                    seven.r_gamma_sq.into(),
                ]);
            }
            Ok(table)
        }
        FigureId::Fig7 => {
            let mut table = Table::new(&["delta_p_over_gamma", "P_over_gamma", "minus_im_chi"]);
            s.describe(&mut table);
            table.meta("command", "figure fig7");
            table.meta("figure_states", "5");
            let mut scen = s.clone();
            scen.states = 5;
            scen.coupling_mode = CouplingModeArg::EqualCouplings;
            let cfg = scen.config_si()?;
            let dp_grid: Vec<f64> = (0..41).map(|i| (i as f64 - 20.0) * 0.1 * gamma).collect();
            let p_grid: Vec<f64> = linspace(0.05, 1.0, 20).iter().map(|p| p * gamma).collect();
            let rows = absorption_surface(&cfg, &dp_grid, &p_grid)?;
            for r in rows {
                table.row(vec![
                    r.delta_p_over_gamma.into(),
                    r.p_over_gamma.into(),
                    r.minus_im_chi.into(),
                ]);
            }
            Ok(table)
        }
    }
}
