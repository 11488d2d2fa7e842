use std::f64::consts::PI;
use std::path::Path;

use anyhow::anyhow;
use dilute_core::free_energy::{box_assembly, chemical_potential, f_thermo, BogEvaluator};
use dilute_core::neumann::{momenta_up_to, verify_diagonalization, RadialBump};
use dilute_core::potentials::RadialPotential;
use dilute_core::regimes::{check_constraints, RegimeParams};
use dilute_core::regularize::{regularize, verify_certificate};
use dilute_core::scattering::{solve_scattering, DEFAULT_GRID_SIZE};
use dilute_core::verdict::{Verdict, VerdictKind};
use dilute_core::verify::{self, square_well_root};

use crate::config::{Overrides, RunConfig};
use crate::output::{num, write_text, Table};

/// Error split by exit code: configuration problems (2) or failed computations (1).
#[derive(Debug)]
pub enum CliError {
    Usage(anyhow::Error),
    Run(anyhow::Error),
}

impl From<dilute_core::Error> for CliError {
    fn from(e: dilute_core::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Run(e)
    }
}

pub type CmdResult = Result<bool, CliError>;

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub tol: &'a Overrides,
    pub out: &'a Path,
    pub source: String,
}

fn usage<T>(r: anyhow::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::Usage)
}

fn usage_core<T>(r: dilute_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Usage(e.into()))
}

impl Ctx<'_> {
    fn table(&self, command: &str, header: &[&str]) -> Table {
        let mut t = Table::new(header);
        t.meta("command", command).meta("config", &self.source);
        let o = self.tol.describe();
        if !o.is_empty() {
            t.meta("overrides", o);
        }
        t
    }

    fn save(&self, table: &Table, name: &str) -> anyhow::Result<()> {
        let path = table.write(self.out, name)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

/// Prints verdicts and writes them as a CSV; returns whether none failed.
fn report_verdicts(ctx: &Ctx, command: &str, verdicts: &[Verdict], name: &str) -> anyhow::Result<bool> {
    let mut t = ctx.table(command, &["name", "kind", "passed", "value", "bound", "detail"]);
    for v in verdicts {
        println!("  {v}");
        let kind = match v.kind {
            VerdictKind::Exact => "exact",
            VerdictKind::Structural => "structural",
            VerdictKind::Informational => "informational",
        };
        t.row(vec![
            v.name.replace(',', ";"),
            kind.into(),
            v.passed.to_string(),
            num(v.value),
            num(v.bound),
            v.detail.replace(',', ";"),
        ]);
    }
    ctx.save(&t, name)?;
    Ok(verdicts.iter().all(|v| !v.is_failure()))
}

fn rel(x: f64, y: f64) -> f64 {
    ((x - y) / y).abs()
}

pub fn scatter(ctx: &Ctx) -> CmdResult {
    let v = usage(ctx.cfg.potential(ctx.tol))?;
    let sc = ctx.cfg.scatter.clone().unwrap_or_default();
    let support = v.support_radius();
    let r_out = sc.r_out.unwrap_or(if support > 0.0 { 2.0 * support } else { 1.0 });
    let grid = usage(ctx.tol.usize("grid"))?.or(sc.grid).unwrap_or(DEFAULT_GRID_SIZE);
    let sol = usage_core(solve_scattering(&v, r_out, grid))?;
    println!("scattering length a = {:e}", sol.a);
    println!("fit a = {:e} (rms residual {:e})", sol.a_fit, sol.fit_residual);

    let mut phi = ctx.table("scatter", &["r", "phi", "omega", "g"]);
    phi.meta("a", num(sol.a)).meta("r_out", num(sol.r_out));
    for i in 0..sol.grid.len() {
        phi.row(vec![num(sol.grid[i]), num(sol.phi[i]), num(sol.omega[i]), num(sol.g[i])]);
    }
    ctx.save(&phi, "phi.csv")?;

    let mut verdicts = vec![Verdict::new(
        "tail fit agrees with a",
        VerdictKind::Informational,
        true,
        rel(sol.a_fit, sol.a),
        0.0,
    )];
    if support > 0.0 {
        let energy = sol.variational_energy()?;
        verdicts.push(Verdict::at_most(
            "variational energy equals a",
            VerdictKind::Exact,
            rel(energy, sol.a),
            1e-6,
        ));
    }
    if sol.is_hard_core() {
        println!("hard core: the transform of g is not a function; ghat table skipped");
    } else if support > 0.0 {
        let momenta = if sc.momenta.is_empty() {
            (0..=40).map(|i| 0.25 * i as f64 / support).collect()
        } else {
            sc.momenta.clone()
        };
        let table = sol.ghat_table(&momenta)?;
        let mut gt = ctx.table("scatter", &["p", "ghat"]);
        gt.meta("a", num(sol.a));
        for (p, g) in &table {
            gt.row(vec![num(*p), num(*g)]);
        }
        ctx.save(&gt, "ghat.csv")?;
        let g0 = sol.fourier_hat(0.0)?;
        verdicts.push(Verdict::at_most(
            "ghat(0) equals 8 pi a",
            VerdictKind::Exact,
            rel(g0, 8.0 * PI * sol.a),
            1e-6,
        ));
        let go = sol.g_omega_zero()?;
        verdicts.push(Verdict::at_most("(g omega)^(0) <= ghat(0)", VerdictKind::Exact, go, g0));
    }

    if !sc.sweep_gamma.is_empty() {
        let r = sc.sweep_radius.unwrap_or(1.0);
        let mut sw = ctx.table("scatter", &["gamma", "height", "a_solver", "a_closed", "rel_err"]);
        sw.meta("radius", num(r));
        let mut worst = 0.0_f64;
        for &gamma in &sc.sweep_gamma {
            let height = 2.0 * gamma * gamma / (r * r);
            let well = usage_core(RadialPotential::square_well(height, r))?;
            let s = solve_scattering(&well, 2.0 * r, grid)?;
            let closed = square_well_root(gamma, r);
            let err = rel(s.a, closed);
            worst = worst.max(err);
            sw.row(vec![num(gamma), num(height), num(s.a), num(closed), num(err)]);
        }
        ctx.save(&sw, "gamma_sweep.csv")?;
        verdicts.push(Verdict::at_most(
            "square-well sweep max rel err",
            VerdictKind::Exact,
            worst,
            1e-8,
        ));
    }
    Ok(report_verdicts(ctx, "scatter", &verdicts, "scatter_verdicts.csv")?)
}

pub fn regularize_cmd(ctx: &Ctx) -> CmdResult {
    let big_v = usage(ctx.cfg.potential(ctx.tol))?;
    let rc = usage(ctx.cfg.block(&ctx.cfg.regularize, "regularize"))?;
    let out = regularize(&big_v, rc.rho, rc.eta)?;
    let c = &out.certificate;
    println!("a(V) = {:e}, a(v) = {:e}, gap = {:e}", c.a_big_v, c.a_v, c.a_gap);
    println!("int v = {:e}, sup v = {:e}, l = {:e}", c.integral_v, c.sup_v, c.trace.ell);

    let mut prof = ctx.table("regularize", &["r_lo", "r_hi", "value"]);
    prof.meta("rho", num(rc.rho)).meta("eta", num(rc.eta)).meta("a_v", num(c.a_v));
    if out.v.core_radius() > 0.0 {
        prof.row(vec![num(0.0), num(out.v.core_radius()), "inf".into()]);
    }
    for s in out.v.shells() {
        prof.row(vec![num(s.r_lo), num(s.r_hi), num(s.value)]);
    }
    ctx.save(&prof, "profile.csv")?;

    let cert = toml::to_string(c).map_err(|e| anyhow!("serializing certificate: {e}"))?;
    let path = write_text(ctx.out, "certificate.toml", &cert)?;
    println!("wrote {}", path.display());

    let verdicts = verify_certificate(c, rc.rho, rc.eta);
    Ok(report_verdicts(ctx, "regularize", &verdicts, "regularize_verdicts.csv")?)
}

pub fn fbog(ctx: &Ctx) -> CmdResult {
    let fc = usage(ctx.cfg.block(&ctx.cfg.fbog, "fbog"))?;
    let t = fc.temperature;
    let mut ells = fc.ell.clone();
    if !fc.ell_sqrt_t.is_empty() {
        if !(t > 0.0) {
            return Err(CliError::Usage(anyhow!("[fbog] ell_sqrt_t needs temperature > 0")));
        }
        ells.extend(fc.ell_sqrt_t.iter().map(|x| x / t.sqrt()));
    }
    if ells.is_empty() {
        return Err(CliError::Usage(anyhow!("[fbog] needs a non-empty ell or ell_sqrt_t list")));
    }
    let budget = usage(ctx.tol.budget())?;
    let thermo = f_thermo(fc.rho, t, fc.a)?;
    println!("f_thermo = {:e}", thermo.value);

    let mut header = vec![
        "ell", "n", "mean_field", "lhy", "thermal_sum", "thermal_integral", "total", "per_volume",
        "discrepancy", "scaled_discrepancy", "p_max", "shells", "tail_bound",
    ];
    if fc.mu {
        header.extend(["mu", "mu_half_step", "mu_analytic"]);
    }
    let mut tab = ctx.table("fbog", &header);
    tab.meta("a", num(fc.a))
        .meta("rho", num(fc.rho))
        .meta("temperature", num(t))
        .meta("f_thermo", num(thermo.value))
        .meta("scaled_discrepancy", "discrepancy * l sqrt(T) / T^(5/2)");
    let mut ok = true;
    for &ell in &ells {
        let eval = BogEvaluator::new(ell, fc.a, t, budget)?;
        let n = fc.rho * ell.powi(3);
        let r = eval.f_bog(n)?;
        let per_volume = r.total / ell.powi(3);
        let disc = per_volume - thermo.value;
        // the discrepancy is O((T l^2)^(-1/2) T^(5/2))
        let scaled = if t > 0.0 { disc * ell * t.sqrt() / t.powf(2.5) } else { disc * ell };
        println!("ell = {ell:e}: F/l^3 = {per_volume:e}, discrepancy = {disc:e}, scaled = {scaled:e}");
        let mut row = vec![
            num(ell),
            num(n),
            num(r.mean_field),
            num(r.lhy),
            num(r.thermal_sum),
            num(r.thermal_integral),
            num(r.total),
            num(per_volume),
            num(disc),
            num(scaled),
            num(r.p_max),
            r.shells.to_string(),
            num(r.sum_tail_bound),
        ];
        if fc.mu {
            match chemical_potential(&eval, fc.rho) {
                Ok(mu) => row.extend([num(mu.mu), num(mu.mu_half_step), num(mu.analytic)]),
                Err(e) => {
                    println!("  mu at ell = {ell:e}: {e}");
                    ok = false;
                    row.extend(["nan".into(), "nan".into(), "nan".into()]);
                }
            }
        }
        tab.row(row);
    }
    ctx.save(&tab, "fbog.csv")?;
    Ok(ok)
}

pub fn fthermo(ctx: &Ctx) -> CmdResult {
    let fc = usage(ctx.cfg.block(&ctx.cfg.fthermo, "fthermo"))?;
    let a = fc.a;
    let mut tab = ctx.table(
        "fthermo",
        &["rho_a3", "t_over_rho_a", "rho", "temperature", "mean_field", "lhy", "thermal", "total", "tail_bound"],
    );
    tab.meta("a", num(a));
    for &y in &fc.rho_a3 {
        let rho = y / a.powi(3);
        for &tr in &fc.t_over_rho_a {
            let t = tr * rho * a;
            let v = f_thermo(rho, t, a)?;
            println!("rho a^3 = {y:e}, T/(rho a) = {tr:e}: f = {:e}", v.value);
            tab.row(vec![
                num(y),
                num(tr),
                num(rho),
                num(t),
                num(v.mean_field),
                num(v.lhy),
                num(v.thermal),
                num(v.value),
                num(v.tail_bound),
            ]);
        }
    }
    ctx.save(&tab, "fthermo.csv")?;
    Ok(true)
}

pub fn assemble(ctx: &Ctx) -> CmdResult {
    let ac = usage(ctx.cfg.block(&ctx.cfg.assemble, "assemble"))?;
    let k = ac.big_l / ac.ell;
    let k_int = k.round();
    if !(k_int >= 1.0 && (k - k_int).abs() <= 1e-9 * k) {
        return Err(CliError::Usage(anyhow!("[assemble] big_l / ell = {k} is not a positive integer")));
    }
    let boxes = (k_int as u64).pow(3);
    if ac.n == 0 || ac.n % boxes != 0 {
        return Err(CliError::Usage(anyhow!(
            "[assemble] n = {} does not split into {boxes} boxes with at least one particle each",
            ac.n
        )));
    }
    let n0 = ac.n / boxes;
    let eval = BogEvaluator::new(ac.ell, ac.a, ac.temperature, usage(ctx.tol.budget())?)?;
    let r = box_assembly(&eval, n0, boxes)?;
    let volume = ac.big_l.powi(3);
    let rho = ac.n as f64 / volume;
    let thermo = f_thermo(rho, ac.temperature, ac.a)?;
    println!("M = {boxes}, n0 = {n0}, mu = {:e}", r.mu);
    println!("assembled = {:e}, M F_Bog = {:e}", r.assembled, r.reference);
    println!("per volume = {:e}, f_thermo = {:e}", r.assembled / volume, thermo.value);

    let mut tab = ctx.table(
        "assemble",
        &["boxes", "n0", "mu", "assembled", "reference", "per_volume", "f_thermo", "summed_lo", "summed_hi",
          "remainder_bound", "entropy_slack_bound"],
    );
    tab.meta("big_l", num(ac.big_l))
        .meta("ell", num(ac.ell))
        .meta("a", num(ac.a))
        .meta("temperature", num(ac.temperature));
    tab.row(vec![
        boxes.to_string(),
        n0.to_string(),
        num(r.mu),
        num(r.assembled),
        num(r.reference),
        num(r.assembled / volume),
        num(thermo.value),
        r.summed_range.0.to_string(),
        r.summed_range.1.to_string(),
        num(r.remainder_bound),
        num(r.entropy_slack_bound),
    ]);
    ctx.save(&tab, "assemble.csv")?;

    let verdicts = vec![Verdict::at_most(
        format!("termwise convexity violation on [0, {}]", r.convexity_checked_upto),
        VerdictKind::Exact,
        r.convexity_violation,
        0.0,
    )];
    Ok(report_verdicts(ctx, "assemble", &verdicts, "assemble_verdicts.csv")?)
}

pub fn symcheck(ctx: &Ctx) -> CmdResult {
    let sc = usage(ctx.cfg.block(&ctx.cfg.symcheck, "symcheck"))?;
    let bump = usage_core(RadialBump::new(sc.radius, sc.amplitude))?;
    let nodes = usage(ctx.tol.usize("nodes"))?.or(sc.nodes).unwrap_or(16);
    let momenta = momenta_up_to(sc.n2_max);
    let r = usage_core(verify_diagonalization(&bump, sc.ell, &momenta, nodes))?;
    println!(
        "{} basis functions, max off-diagonal {:e}, max diagonal rel err {:e}, refinement change {:e}",
        momenta.len(),
        r.max_off_diagonal,
        r.max_diagonal_rel_error,
        r.refinement_change
    );
    let mut tab = ctx.table("symcheck", &["i", "j", "n_i", "n_j", "matrix", "residual"]);
    tab.meta("ell", num(sc.ell))
        .meta("radius", num(sc.radius))
        .meta("nodes", nodes)
        .meta("fhat_zero", num(r.fhat_zero));
    let label = |n: [u32; 3]| format!("{}{}{}", n[0], n[1], n[2]);
    let m = momenta.len();
    for i in 0..m {
        for j in 0..m {
            tab.row(vec![
                i.to_string(),
                j.to_string(),
                label(momenta[i]),
                label(momenta[j]),
                num(r.matrix[i * m + j]),
                num(r.residual(i, j)),
            ]);
        }
    }
    ctx.save(&tab, "symcheck.csv")?;
    let scale = r.fhat_zero.abs();
    let verdicts = vec![
        Verdict::at_most("max off-diagonal / |fhat(0)|", VerdictKind::Exact, r.max_off_diagonal / scale, 1e-10),
        Verdict::at_most("max diagonal rel err", VerdictKind::Exact, r.max_diagonal_rel_error, 1e-10),
    ];
    Ok(report_verdicts(ctx, "symcheck", &verdicts, "symcheck_verdicts.csv")?)
}

pub fn regime(ctx: &Ctx) -> CmdResult {
    let rc = usage(ctx.cfg.block(&ctx.cfg.regime, "regime"))?;
    let mut tab = ctx.table(
        "regime",
        &["rho_a3", "eta", "nu", "temperature", "k_ell", "ell", "k_h", "m", "exact_pass", "structural_pass", "failures"],
    );
    tab.meta("a", num(rc.a))
        .meta("nu_over_eta", num(rc.nu_over_eta))
        .meta("t_over_rho_a", num(rc.t_over_rho_a));
    let mut ok = true;
    for &y in &rc.rho_a3 {
        let rho = y / rc.a.powi(3);
        for &eta in &rc.eta {
            let params = usage_core(RegimeParams::new(rho, rc.a, rc.t_over_rho_a * rho * rc.a, eta, rc.nu_over_eta * eta))?;
            let d = params.derive();
            let vs = check_constraints(&params);
            let failed = |kind: VerdictKind| vs.iter().filter(|v| v.kind == kind && !v.passed).count();
            let (exact, structural) = (failed(VerdictKind::Exact), failed(VerdictKind::Structural));
            let names: Vec<String> = vs.iter().filter(|v| v.is_failure()).map(|v| v.name.replace(',', ";")).collect();
            if exact + structural > 0 {
                ok = false;
                println!("rho a^3 = {y:e}, eta = {eta:e}: {}", names.join("; "));
            }
            tab.row(vec![
                num(y),
                num(eta),
                num(params.nu),
                num(params.temperature),
                num(d.k_ell),
                num(d.ell),
                num(d.k_h),
                num(d.m),
                (exact == 0).to_string(),
                (structural == 0).to_string(),
                names.join("; "),
            ]);
        }
    }
    println!(
        "{} points, {}",
        rc.rho_a3.len() * rc.eta.len(),
        if ok { "all hypotheses hold" } else { "some hypotheses fail" }
    );
    ctx.save(&tab, "regime.csv")?;
    Ok(ok)
}

pub fn verify_cmd(ctx: &Ctx) -> CmdResult {
    let mut tab = ctx.table("verify", &["id", "title", "passed", "summary", "elapsed_s"]);
    let mut ok = true;
    for check in verify::ALL {
        let r = check();
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("{tag} C{} {}: {} ({:.2}s)", r.id, r.title, r.summary, r.elapsed_s);
        for v in r.verdicts.iter().filter(|v| v.is_failure()) {
            println!("    {v}");
        }
        ok &= r.passed;
        tab.row(vec![
            r.id.to_string(),
            r.title.into(),
            r.passed.to_string(),
            r.summary.replace(',', ";"),
            format!("{:.3}", r.elapsed_s),
        ]);
    }
    ctx.save(&tab, "verify.csv")?;
    Ok(ok)
}
