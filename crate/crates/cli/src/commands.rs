use serde_json::{json, Map, Value};

use neron::exact_linalg::cokernel_structure;
use neron::hodge_limits::{
    check_hypothesis_c, ggk_invariant_part, limit_mhs, HodgeFiltrationStep, NilpotentOrbit, Tolerance,
};
use neron::monodromy::{
    admissible_class_subgroup, component_group, link_cohomology_bidisk, MonodromyOperator,
};
use neron::neron_models::{blow_down_clemens, bps_fiber_curve, clemens_extend, ggk_fiber0, zucker_fiber0};
use neron::normal_functions::{
    check_admissible, cohomology_class_curve, monodromy_defect, zucker_limit, NormalFunctionError,
    NormalFunctionExpr,
};
use neron::polydisk_lab::{hausdorff_probe, nu_class, BidiskFamilyConfig, NuPAlpha};
use neron::Complex64;

use crate::family::FamilySpec;
use crate::report::{self, count};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn monodromy(spec: &FamilySpec) -> Result<MonodromyOperator> {
    MonodromyOperator::new(spec.monodromy[0].clone()).map_err(CliError::domain)
}

fn require_f0(spec: &FamilySpec, tol: f64) -> Result<HodgeFiltrationStep> {
    spec.f0_step(tol)?
        .ok_or_else(|| CliError::Domain("this command needs an f0 basis in the family file".into()))
}

fn orbit(spec: &FamilySpec, tol: f64) -> Result<(MonodromyOperator, NilpotentOrbit)> {
    let t = monodromy(spec)?;
    let f0 = require_f0(spec, tol)?;
    let orbit = NilpotentOrbit::from_monodromy(&t, f0, Tolerance::with_rank(tol)).map_err(CliError::domain)?;
    Ok((t, orbit))
}

fn require_nf(spec: &FamilySpec) -> Result<NormalFunctionExpr> {
    let nf = spec
        .normal_function
        .as_ref()
        .ok_or_else(|| CliError::Domain("this command needs a normal_function in the family file".into()))?;
    NormalFunctionExpr::new(spec.rank(), nf.sigma.clone(), nf.ell.clone()).map_err(CliError::domain)
}

pub fn component_groups(spec: &FamilySpec) -> Result<Value> {
    let mut out = Vec::new();
    for (i, t) in spec.monodromy.iter().enumerate() {
        let op = MonodromyOperator::new(t.clone()).map_err(CliError::domain)?;
        let cg = component_group(t).map_err(CliError::domain)?;
        let [a, b, c] = &cg.formulas;
        out.push(json!({
            "index": count(i),
            "matrix": report::int_matrix(t),
            "unipotent": cg.unipotent,
            "quasi_unipotent_order": op.finite_order_part().to_string(),
            "torsion": report::ints(cg.group.torsion()),
            "group": cg.group.to_string(),
            "formulas": {
                "torsion_of_cokernel": report::ints(a.torsion()),
                "saturation_quotient": report::ints(b.torsion()),
                "qz_kernel": report::ints(c.torsion()),
            },
            "qz_enumerated": cg.enumerated,
            "cokernel": report::group(&cokernel_structure(&t.minus_identity())),
        }));
    }
    Ok(json!({ "monodromies": out }))
}

pub fn limit_filtration(spec: &FamilySpec, tol: f64) -> Result<Value> {
    let (_, orbit) = orbit(spec, tol)?;
    let mhs = limit_mhs(&orbit).map_err(CliError::domain)?;
    let (lo, hi) = mhs.w.range();
    let steps: Map<String, Value> = (lo..=hi)
        .map(|k| (k.to_string(), report::lattice(&mhs.w.step(k))))
        .collect();
    let graded: Map<String, Value> = mhs
        .w
        .support()
        .into_iter()
        .map(|k| (k.to_string(), count(mhs.w.graded_rank(k))))
        .collect();
    let hodge: Map<String, Value> = mhs
        .graded_hodge_numbers
        .iter()
        .map(|(&(p, q), &h)| (format!("{p},{q}"), count(h)))
        .collect();
    Ok(json!({
        "log_monodromy": report::rat_matrix(orbit.log()),
        "weight_center": orbit.weight().to_string(),
        "weight_steps": steps,
        "graded_ranks": graded,
        "hodge_numbers": hodge,
        "hypothesis_c": check_hypothesis_c(&orbit),
    }))
}

pub fn fibers(spec: &FamilySpec, tol: f64) -> Result<Value> {
    let f0 = require_f0(spec, tol)?;
    let t = monodromy(spec)?;
    let bps = bps_fiber_curve(t.matrix(), &f0, tol).map_err(CliError::domain)?;
    let mut out = json!({ "bps": report::fiber(&bps) });
    if t.is_unipotent() {
        let (t, orbit) = orbit(spec, tol)?;
        let zucker = zucker_fiber0(&orbit, &t).map_err(CliError::domain)?;
        let ggk = ggk_fiber0(&orbit, &t).map_err(CliError::domain)?;
        let (ker, f0_inv) = ggk_invariant_part(&orbit);
        let g0 = component_group(t.matrix()).map_err(CliError::domain)?.group;
        out["zucker"] = report::fiber(&zucker);
        out["ggk"] = report::fiber(&ggk);
        out["ggk_invariant_lattice"] = report::lattice(&ker);
        out["ggk_f0_dim"] = count(f0_inv.dim());
        out["clemens_components"] = g0.order().map_or(Value::Null, |o| report::int(&o));
    }
    Ok(out)
}

pub fn nf_check(spec: &FamilySpec) -> Result<Value> {
    let t = monodromy(spec)?;
    let nf = require_nf(spec)?;
    let adm = check_admissible(&nf, &t).map_err(CliError::domain)?;
    let defect = monodromy_defect(&nf, &t).map_err(CliError::domain)?;
    let class = cohomology_class_curve(&nf, &t).map_err(CliError::domain)?;
    Ok(json!({
        "defect": report::ints(&defect),
        "log_growth": adm.log_growth,
        "defect_in_image": adm.defect_in_image,
        "admissible": adm.is_admissible(),
        "class": report::class(&class),
        "zucker_extendable": adm.is_admissible() && class.is_zero(),
    }))
}

pub fn nf_extend(spec: &FamilySpec, tol: f64) -> Result<Value> {
    let (t, orbit) = orbit(spec, tol)?;
    let nf = require_nf(spec)?;
    let zucker = match zucker_limit(&nf, &t, &orbit) {
        Ok(limit) => json!({
            "extends": true,
            "point": report::point(&limit.point),
            "representative": report::complexes(&limit.representative),
            "correction": report::ints(&limit.correction),
        }),
        Err(NormalFunctionError::NotExtendable(class)) => json!({
            "extends": false,
            "class": report::class(&class),
        }),
        Err(e) => return Err(CliError::domain(e)),
    };
    let clemens = clemens_extend(&nf, &t, &orbit).map_err(CliError::domain)?;
    let down = blow_down_clemens(&clemens, &t, &orbit).map_err(CliError::domain)?;
    Ok(json!({
        "zucker": zucker,
        "clemens": {
            "component": report::class(&clemens.component),
            "point": report::point(&clemens.coordinate.point),
            "basepoint": report::normal_function(&clemens.basepoint),
        },
        "bps_point": report::point(&down),
    }))
}

pub fn link_cohomology(spec: &FamilySpec) -> Result<Value> {
    let [t1, t2] = &spec.monodromy[..] else {
        return Err(CliError::Domain("link-cohomology needs two commuting monodromies".into()));
    };
    let lc = link_cohomology_bidisk(t1, t2).map_err(CliError::domain)?;
    let adm = admissible_class_subgroup(&lc);
    Ok(json!({
        "h0": report::lattice(&lc.h0),
        "h1": report::group(&lc.h1),
        "h1_basis": lc.h1_basis.iter().map(report::cocycle).collect::<Value>(),
        "admissible": {
            "group": report::group(&adm.group),
            "generators": adm.generators.iter().map(report::cocycle).collect::<Value>(),
            "classes": adm.generator_classes.iter().map(|c| report::ints(c)).collect::<Value>(),
        },
    }))
}

/// Everything the family file supports.
pub fn analyze(spec: &FamilySpec, tol: f64) -> Result<Value> {
    let mut out = json!({ "component_group": component_groups(spec)? });
    let unipotent = monodromy(spec)?.is_unipotent();
    if spec.f0.is_some() {
        if unipotent {
            out["limit_filtration"] = limit_filtration(spec, tol)?;
        }
        out["fiber"] = fibers(spec, tol)?;
    }
    if spec.normal_function.is_some() && unipotent {
        out["nf_check"] = nf_check(spec)?;
        if spec.f0.is_some() {
            out["nf_extend"] = nf_extend(spec, tol)?;
        }
    }
    if spec.monodromy.len() == 2 {
        out["link_cohomology"] = link_cohomology(spec)?;
    }
    Ok(out)
}

pub struct ProbeArgs {
    pub p: i64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub samples: u32,
}

/// Report body and CSV.
pub fn probe(args: &ProbeArgs, tol: f64) -> Result<(Value, String)> {
    let cfg = BidiskFamilyConfig::new(Tolerance::with_rank(tol)).map_err(CliError::domain)?;
    let nf = NuPAlpha::new(args.p, args.alpha).map_err(CliError::domain)?;
    let r = hausdorff_probe(&cfg, &nf, args.beta, args.samples).map_err(CliError::domain)?;
    let class = nu_class(&cfg, &nf).map_err(CliError::domain)?;
    let value = json!({
        "p": args.p.to_string(),
        "alpha": report::complex(args.alpha),
        "beta": report::complex(args.beta),
        "samples_requested": args.samples.to_string(),
        "samples_kept": count(r.samples.len()),
        "schedule": "t1 = 2^-j, t2 = beta * t1^max(|p|-1, 1)",
        "limit_chart0": r.limit_chart0.map_or(Value::Null, report::complex),
        "expected_limit": r.expected_limit.map_or(Value::Null, report::complex),
        "verdict": r.verdict.as_str(),
        "extended_component": r.extended_component.to_string(),
        "extended_value": report::complex(r.extended_value),
        "nu_class": report::ints(&class.class),
    });
    Ok((value, r.to_csv()))
}
