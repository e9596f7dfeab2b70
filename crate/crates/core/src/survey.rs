//! Reduced-bound survey: every catalog inclusion of bounded index, reduced
//! to one representative per equivalence class, classified on both sides.
//!
//! Output order depends only on the inclusions themselves, so reordering
//! the catalog leaves the CSV and the summary unchanged byte for byte.

use crate::boxalgebra::{BoxContext, Side};
use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::interval::{equivalence_key, inclusions_equivalent, subgroup_label, Inclusion};
use crate::permgroup::{FiniteGroup, Subgroup, DEFAULT_SUBGROUP_CAP};
use crate::properties::{classify, ClassificationReport, ClassifyOptions};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_MAX_INDEX: usize = 12;
/// Seeds tried when a numeric rank decision lands in the ambiguity band.
const SEED_RETRIES: u64 = 4;

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    pub max_index: usize,
    pub max_order: usize,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            max_index: DEFAULT_MAX_INDEX,
            max_order: crate::permgroup::DEFAULT_ORDER_CAP,
            seed: 0,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyRecord {
    pub class_id: usize,
    pub label: String,
    pub group: String,
    pub subgroup: String,
    pub group_order: usize,
    pub index: usize,
    pub class_size: usize,
    pub interval_size: Option<usize>,
    pub distributive: Option<bool>,
    pub dedekind: Option<bool>,
    pub cyclic: Option<bool>,
    pub h_cyclic: Option<bool>,
    pub linearly_primitive: Option<bool>,
    pub w_cyclic_primal: Option<bool>,
    pub w_cyclic_dual: Option<bool>,
    pub w_plus_primal: Option<bool>,
    pub w_plus_dual: Option<bool>,
    pub z_primal: Option<bool>,
    pub zz_primal: Option<bool>,
    pub f2_primal: Option<bool>,
    pub f2_dual: Option<bool>,
    pub sum_primal: Option<String>,
    pub sum_dual: Option<String>,
    pub cond_normal: Option<bool>,
    pub cond_sum: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub max_index: usize,
    pub max_order: usize,
    pub inclusions: usize,
    pub total: usize,
    pub errors: usize,
    pub distributive: usize,
    pub dedekind: usize,
    pub cyclic: usize,
    pub distributive_and_dedekind: usize,
    pub w_cyclic_primal: usize,
    pub w_cyclic_dual: usize,
    pub w_plus_primal: usize,
    pub maximal: usize,
    pub maximal_cyclic: usize,
    /// classes where exactly one of the two dual-Ore conditions holds
    pub dual_ore_separating: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Survey {
    pub records: Vec<SurveyRecord>,
    pub summary: SurveySummary,
}

struct Candidate {
    group_name: String,
    group: Arc<FiniteGroup>,
    sub: Subgroup,
    key: Vec<usize>,
}

/// Subgroup classes of bounded index in every catalog group, canonically sorted.
fn candidates(catalog: &[CatalogEntry], opts: &SurveyOptions) -> Result<(Vec<Candidate>, Vec<SurveyRecord>)> {
    let mut entries: Vec<&CatalogEntry> = catalog.iter().filter(|e| e.order <= opts.max_order).collect();
    entries.sort_by(|a, b| (a.order, &a.name).cmp(&(b.order, &b.name)));
    let mut out = Vec::new();
    let mut failed = Vec::new();
    for e in entries {
        let group = Arc::new(e.build()?);
        let reps = match group.subgroup_class_representatives(DEFAULT_SUBGROUP_CAP) {
            Ok(r) => r,
            Err(err) => {
                failed.push(error_record(&e.name, "*", e.order, 0, &err));
                continue;
            }
        };
        for sub in reps {
            let index = group.order() / sub.order();
            if index > opts.max_index {
                continue;
            }
            let inc = Inclusion::new(group.clone(), sub.clone(), "");
            match equivalence_key(&inc) {
                Ok(key) => out.push(Candidate {
                    group_name: e.name.clone(),
                    group: group.clone(),
                    sub,
                    key,
                }),
                Err(err) => failed.push(error_record(
                    &e.name,
                    &subgroup_label(&group, &sub),
                    e.order,
                    index,
                    &err,
                )),
            }
        }
    }
    Ok((out, failed))
}

fn error_record(group: &str, subgroup: &str, order: usize, index: usize, err: &Error) -> SurveyRecord {
    SurveyRecord {
        class_id: 0,
        label: format!("{group}/{subgroup}"),
        group: group.to_string(),
        subgroup: subgroup.to_string(),
        group_order: order,
        index,
        class_size: 1,
        interval_size: None,
        distributive: None,
        dedekind: None,
        cyclic: None,
        h_cyclic: None,
        linearly_primitive: None,
        w_cyclic_primal: None,
        w_cyclic_dual: None,
        w_plus_primal: None,
        w_plus_dual: None,
        z_primal: None,
        zz_primal: None,
        f2_primal: None,
        f2_dual: None,
        sum_primal: None,
        sum_dual: None,
        cond_normal: None,
        cond_sum: None,
        error: Some(err.to_string()),
    }
}

/// Groups candidates into equivalence classes; each class is listed by
/// candidate position, the first being the representative.
fn equivalence_classes(cands: &[Candidate]) -> Vec<Vec<usize>> {
    let mut buckets: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
    for (i, c) in cands.iter().enumerate() {
        buckets.entry(&c.key).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for members in buckets.values() {
        let mut local: Vec<Vec<usize>> = Vec::new();
        for &i in members {
            let a = Inclusion::new(cands[i].group.clone(), cands[i].sub.clone(), "");
            let home = local.iter_mut().find(|class| {
                let r = class[0];
                let b = Inclusion::new(cands[r].group.clone(), cands[r].sub.clone(), "");
                inclusions_equivalent(&a, &b).unwrap_or(false)
            });
            match home {
                Some(class) => class.push(i),
                None => local.push(vec![i]),
            }
        }
        classes.extend(local);
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

fn with_retries<T>(seed: u64, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut last = None;
    for k in 0..SEED_RETRIES {
        match f(seed.wrapping_add(k * 0x9e37_79b9)) {
            Err(e @ Error::NumericRankAmbiguous { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

struct Classified {
    primal: ClassificationReport,
    dual: ClassificationReport,
    h_cyclic: bool,
    linearly_primitive: bool,
    cond_normal: bool,
    cond_sum: bool,
}

fn classify_both(group: Arc<FiniteGroup>, sub: Subgroup, label: &str, seed: u64) -> Result<Classified> {
    let ctx = BoxContext::new(group.clone(), sub.clone(), label)?;
    let opts = |seed| ClassifyOptions {
        seed,
        lengths: Vec::new(),
        zz_search: false,
    };
    let primal = with_retries(seed, |s| classify(&ctx, Side::Primal, &opts(s)))?;
    let dual = with_retries(seed, |s| classify(&ctx, Side::Dual, &opts(s)))?;
    let inc = Inclusion::new(group, sub, label);
    let linearly_primitive = with_retries(seed, |s| inc.is_linearly_primitive(s))?;
    let ore = inc.dual_ore_conditions()?;
    Ok(Classified {
        h_cyclic: primal.witnesses.h_cyclic.is_some(),
        primal,
        dual,
        linearly_primitive,
        cond_normal: ore.cond_normal,
        cond_sum: ore.cond_sum,
    })
}

pub fn run_survey(catalog: &[CatalogEntry], opts: &SurveyOptions) -> Result<Survey> {
    let (cands, failed) = candidates(catalog, opts)?;
    let classes = equivalence_classes(&cands);
    let work = |(class_id, members): (usize, &Vec<usize>)| -> SurveyRecord {
        let c = &cands[members[0]];
        let sub_label = subgroup_label(&c.group, &c.sub);
        let label = format!("{}/{}", c.group_name, sub_label);
        let index = c.group.order() / c.sub.order();
        let seed = opts.seed.wrapping_add(class_id as u64);
        let mut rec = error_record(
            &c.group_name,
            &sub_label,
            c.group.order(),
            index,
            &Error::ContextMismatch,
        );
        rec.class_id = class_id;
        rec.class_size = members.len();
        match classify_both(c.group.clone(), c.sub.clone(), &label, seed) {
            Ok(k) => {
                rec.error = None;
                rec.interval_size = Some(k.primal.interval_size);
                rec.distributive = Some(k.primal.distributive);
                rec.dedekind = Some(k.primal.dedekind);
                rec.cyclic = Some(k.primal.cyclic);
                rec.h_cyclic = Some(k.h_cyclic);
                rec.linearly_primitive = Some(k.linearly_primitive);
                rec.w_cyclic_primal = Some(k.primal.w_cyclic);
                rec.w_cyclic_dual = Some(k.dual.w_cyclic);
                rec.w_plus_primal = Some(k.primal.w_plus_cyclic);
                rec.w_plus_dual = Some(k.dual.w_plus_cyclic);
                rec.z_primal = Some(k.primal.z);
                rec.zz_primal = Some(k.primal.zz);
                rec.f2_primal = Some(k.primal.f2);
                rec.f2_dual = Some(k.dual.f2);
                rec.sum_primal = Some(k.primal.sum_bound.to_string());
                rec.sum_dual = Some(k.dual.sum_bound.to_string());
                rec.cond_normal = Some(k.cond_normal);
                rec.cond_sum = Some(k.cond_sum);
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec.label = label;
        rec
    };
    let indexed: Vec<(usize, &Vec<usize>)> = classes.iter().enumerate().collect();
    let mut records: Vec<SurveyRecord> = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| indexed.into_par_iter().map(work).collect()),
        None => indexed.into_par_iter().map(work).collect(),
    };
    let offset = records.len();
    records.extend(failed.into_iter().enumerate().map(|(i, mut r)| {
        r.class_id = offset + i;
        r
    }));
    let summary = summarize(&records, cands.len(), opts);
    check_summary(&records, &summary)?;
    Ok(Survey { records, summary })
}

fn summarize(records: &[SurveyRecord], inclusions: usize, opts: &SurveyOptions) -> SurveySummary {
    let count = |f: &dyn Fn(&SurveyRecord) -> bool| records.iter().filter(|r| f(r)).count();
    let yes = |b: Option<bool>| b == Some(true);
    SurveySummary {
        max_index: opts.max_index,
        max_order: opts.max_order,
        inclusions,
        total: records.len(),
        errors: count(&|r| r.error.is_some()),
        distributive: count(&|r| yes(r.distributive)),
        dedekind: count(&|r| yes(r.dedekind)),
        cyclic: count(&|r| yes(r.cyclic)),
        distributive_and_dedekind: count(&|r| yes(r.distributive) && yes(r.dedekind)),
        w_cyclic_primal: count(&|r| yes(r.w_cyclic_primal)),
        w_cyclic_dual: count(&|r| yes(r.w_cyclic_dual)),
        w_plus_primal: count(&|r| yes(r.w_plus_primal)),
        maximal: count(&|r| r.interval_size == Some(2)),
        maximal_cyclic: count(&|r| r.interval_size == Some(2) && yes(r.cyclic)),
        dual_ore_separating: records
            .iter()
            .filter(|r| r.cond_normal.is_some() && r.cond_normal != r.cond_sum)
            .map(|r| r.label.clone())
            .collect(),
    }
}

fn check_summary(records: &[SurveyRecord], s: &SurveySummary) -> Result<()> {
    for r in records {
        if r.cyclic == Some(true) && (r.w_cyclic_primal != Some(true) || r.w_cyclic_dual != Some(true)) {
            return Err(Error::TheoremViolation(format!(
                "{} is cyclic but not w-cyclic",
                r.label
            )));
        }
    }
    if s.cyclic != s.distributive_and_dedekind || s.cyclic > s.w_cyclic_primal || s.w_cyclic_primal > s.total {
        return Err(Error::TheoremViolation("survey counts are inconsistent".into()));
    }
    if s.maximal_cyclic != s.maximal {
        return Err(Error::TheoremViolation("a maximal inclusion is not cyclic".into()));
    }
    Ok(())
}

impl Survey {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}
