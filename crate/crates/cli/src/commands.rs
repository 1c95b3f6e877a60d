use std::fmt;
use std::path::PathBuf;

use anyhow::{anyhow, Result};
use serde_json::{json, Value};

use cotor_core::cohomology::{check_basis, poincare_coeffs, theorem21_basis, Complex};
use cotor_core::differential::{audit_conventions, x26_by_kernel, AuditConfig, ConventionAudit};
use cotor_core::expr::FormalExpr;
use cotor_core::partial::table40_report;
use cotor_core::relations::{
    discover_for_record, discover_relation, ideal_and_split_check, relation_catalog, verify_catalog, Group,
    RelationRecord, RelationVerdict,
};
use cotor_core::spectral::{collapse_check, jump_survey, page_equality_check, Page, PageComparison, SpectralEngine};
use cotor_core::{Differential, FiltrationScheme, NamedGenerators, SignConvention, SignTable};

use crate::cache::MatrixCache;
use crate::report::{Check, Report, RunConfig};

/// Bad flag values; mapped to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub enum Command {
    Audit,
    Basis,
    Diff,
    Homology,
    Poincare,
    Verify,
    Discover {
        support: Option<String>,
        degree: Option<u32>,
        id: Option<String>,
    },
    Table40,
    Spectral,
    IdealCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Audit => "audit",
            Command::Basis => "basis",
            Command::Diff => "diff",
            Command::Homology => "homology",
            Command::Poincare => "poincare",
            Command::Verify => "verify",
            Command::Discover { .. } => "discover",
            Command::Table40 => "table40",
            Command::Spectral => "spectral",
            Command::IdealCheck => "ideal-check",
        }
    }
}

/// Shared state, fixed before any parallel work starts.
pub struct Session {
    pub config: RunConfig,
    pub differential: Differential,
    pub audit: Option<ConventionAudit>,
    pub gens: NamedGenerators,
    pub warnings: Vec<String>,
}

impl Session {
    pub fn new(config: RunConfig) -> Result<Self> {
        let (differential, audit) = match config.convention.as_str() {
            "audit" => {
                let a = audit_conventions(&AuditConfig::default()).map_err(|e| anyhow!(e))?;
                (Differential::new(a.selected), Some(a))
            }
            other => {
                let name = other
                    .strip_prefix("force:")
                    .ok_or_else(|| config_error(format!("unknown convention {other:?}")))?;
                let conv = SignConvention::from_name(name)
                    .ok_or_else(|| config_error(format!("unknown sign rule {name:?}")))?;
                (Differential::new(conv), None)
            }
        };
        let (x26, _) = x26_by_kernel(&differential).map_err(|e| anyhow!(e))?;
        Ok(Session {
            config,
            differential,
            audit,
            gens: NamedGenerators::new(x26, SignTable::default()),
            warnings: Vec::new(),
        })
    }

    pub fn scheme(&self) -> FiltrationScheme {
        FiltrationScheme::from_name(&self.config.scheme).expect("validated by the parser")
    }

    pub fn complex(&mut self, max: u32) -> Result<Complex> {
        match &self.config.cache_dir {
            Some(dir) => {
                let cache = MatrixCache::open(&PathBuf::from(dir))
                    .map_err(|e| config_error(format!("cache directory {dir}: {e}")))?;
                let mut warnings = Vec::new();
                let mats = cache.matrices(&self.differential, max, &mut |w| warnings.push(w));
                for w in &warnings {
                    eprintln!("warning: {w}");
                }
                self.warnings.extend(warnings);
                Ok(Complex::with_matrices(max, self.differential.clone(), mats))
            }
            None => Ok(Complex::new(max, self.differential.clone())),
        }
    }

    pub fn run(&mut self, cmd: &Command) -> Result<Report> {
        let mut report = match cmd {
            Command::Audit => self.audit_cmd(),
            Command::Basis => self.basis_cmd(),
            Command::Diff => self.diff_cmd(),
            Command::Homology => self.homology_cmd(),
            Command::Poincare => Ok(self.poincare_cmd()),
            Command::Verify => self.verify_cmd(),
            Command::Discover { support, degree, id } => self.discover_cmd(support.as_deref(), *degree, id.as_deref()),
            Command::Table40 => Ok(self.table40_cmd()),
            Command::Spectral => self.spectral_cmd(),
            Command::IdealCheck => self.ideal_cmd(),
        }?;
        report.command = cmd.name().to_string();
        Ok(report)
    }

    fn audit_cmd(&mut self) -> Result<Report> {
        let Some(audit) = self.audit.clone() else {
            return Err(config_error("audit needs --convention audit"));
        };
        let witnesses: Vec<RelationRecord> = relation_catalog().into_iter().filter(|r| r.witness.is_some()).collect();
        let summary = verify_catalog(&witnesses, &witnesses, &self.gens, &self.differential, None);
        let mut text = String::new();
        for c in &audit.candidates {
            text.push_str(&format!(
                "{:<22} {}\n",
                c.convention.name(),
                if c.admissible { "admissible" } else { "inadmissible" }
            ));
            if let Some(ex) = &c.first_counterexample {
                text.push_str(&format!("    {ex}\n"));
            }
        }
        text.push_str(&format!(
            "selected {}; x26 = {}\nwitness identities {}/{} under negated generators {:?}\n",
            audit.selected.name(),
            audit.x26,
            summary.search.witness_passes,
            summary.search.witness_checks,
            summary.search.flipped.iter().map(|g| g.name()).collect::<Vec<_>>()
        ));
        for id in &summary.search.failing_witnesses {
            text.push_str(&format!("    unreconciled: {id}\n"));
        }
        let csv = std::iter::once("convention,admissible,random_pairs_ok,d_squared_failure\n".to_string())
            .chain(audit.candidates.iter().map(|c| {
                format!(
                    "{},{},{},{}\n",
                    c.convention.name(),
                    c.admissible,
                    c.random_pairs_ok,
                    c.d_squared_failure.map(|d| d.to_string()).unwrap_or_default()
                )
            }))
            .collect();
        Ok(Report {
            command: String::new(),
            results: json!({ "audit": audit, "sign_search": summary.search }),
            checks: vec![
                Check::new("some convention is admissible", audit.candidates.iter().any(|c| c.admissible)),
                Check::new("closed form agrees with Leibniz expansion", audit.closed_form_agrees),
                Check::new("one sign table reconciles every witness identity", summary.search.consistent),
            ],
            text,
            csv,
        })
    }

    fn basis_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let cx = self.complex(max)?;
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("degree,count,homology_dim,independent,cocycles\n");
        let mut ok = true;
        for n in 0..=max {
            let classes = theorem21_basis(n, &self.gens);
            let check = check_basis(&cx, n, &classes);
            ok &= check.passed();
            let labels: Vec<&str> = classes.iter().map(|c| c.label.as_str()).collect();
            text.push_str(&format!("{n:>3} [{}] {}\n", classes.len(), labels.join(", ")));
            csv.push_str(&format!(
                "{n},{},{},{},{}\n",
                check.count, check.homology_dim, check.independent, check.all_cocycles
            ));
            rows.push(json!({ "check": check, "classes": labels }));
        }
        Ok(Report {
            command: String::new(),
            results: Value::Array(rows),
            checks: vec![Check::new(format!("enumerated basis spans H^n for n <= {max}"), ok)],
            text,
            csv,
        })
    }

    fn diff_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let cx = self.complex(max)?;
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("degree,source_dim,target_dim,rank,nnz\n");
        let mut d_squared = true;
        for n in 0..=max {
            let m = cx.matrix(n);
            if n > 0 {
                d_squared &= m.mul(cx.matrix(n - 1)).map(|p| p.nnz() == 0).unwrap_or(false);
            }
            let row = json!({
                "degree": n,
                "source_dim": m.n_cols(),
                "target_dim": m.n_rows(),
                "rank": cx.rank(n),
                "nnz": m.nnz(),
            });
            text.push_str(&format!(
                "d_{n}: {} -> {}, rank {}, {} nonzeros\n",
                m.n_cols(),
                m.n_rows(),
                cx.rank(n),
                m.nnz()
            ));
            csv.push_str(&format!("{n},{},{},{},{}\n", m.n_cols(), m.n_rows(), cx.rank(n), m.nnz()));
            rows.push(row);
        }
        Ok(Report {
            command: String::new(),
            results: Value::Array(rows),
            checks: vec![Check::new(format!("d o d = 0 through degree {max}"), d_squared)],
            text,
            csv,
        })
    }

    fn homology_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let cx = self.complex(max)?;
        let expected = poincare_coeffs(max);
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("degree,dim,expected,match\n");
        let mut ok = true;
        for n in 0..=max {
            let dim = cx.homology_dim(n);
            let exp = expected[n as usize];
            let hit = dim as i64 == exp;
            ok &= hit;
            rows.push(json!({ "degree": n, "dim": dim, "expected": exp, "match": hit }));
            text.push_str(&format!("H^{n:<3} {dim:>4}  expected {exp:>4}  {}\n", if hit { "ok" } else { "MISMATCH" }));
            csv.push_str(&format!("{n},{dim},{exp},{hit}\n"));
        }
        Ok(Report {
            command: String::new(),
            results: Value::Array(rows),
            checks: vec![Check::new(format!("dim H^n matches the series for n <= {max}"), ok)],
            text,
            csv,
        })
    }

    fn poincare_cmd(&self) -> Report {
        let max = self.config.max_degree;
        let coeffs = poincare_coeffs(max);
        let strs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
        let csv = std::iter::once("degree,coefficient\n".to_string())
            .chain(coeffs.iter().enumerate().map(|(n, c)| format!("{n},{c}\n")))
            .collect();
        Report {
            command: String::new(),
            results: json!({ "coefficients": coeffs }),
            checks: vec![Check::new("coefficients are nonnegative", coeffs.iter().all(|&c| c >= 0))],
            text: format!("[{}]\n", strs.join(",")),
            csv,
        }
    }

    fn verify_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let cx = self.complex(max)?;
        let catalog = relation_catalog();
        let wanted: Vec<RelationRecord> = match self.config.group.as_str() {
            "all" => catalog.clone(),
            g => {
                let g = Group::from_name(g).ok_or_else(|| config_error(format!("unknown group {g:?}")))?;
                catalog.iter().filter(|r| r.group == g).cloned().collect()
            }
        };
        let summary = verify_catalog(&wanted, &catalog, &self.gens, &self.differential, Some(&cx));
        let corrected: std::collections::BTreeMap<&str, bool> = summary
            .errata
            .iter()
            .map(|e| (e.id.as_str(), e.corrected_coeffs.is_some()))
            .collect();
        let mut text = String::new();
        let mut csv = String::from("id,group,degree,verdict,status\n");
        let mut rows = Vec::new();
        let mut failures = 0;
        for r in &summary.records {
            let status = match r.witness_pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None if r.verdict == RelationVerdict::Exact => "PASS",
                None if corrected.get(r.id.as_str()) == Some(&true) => "ERRATA",
                None => "FAIL",
            };
            if status == "FAIL" {
                failures += 1;
            }
            text.push_str(&format!("{status:<6} {:<22} {}\n", r.id, r.display));
            csv.push_str(&format!("{},{},{},{:?},{status}\n", r.id, r.group.name(), r.degree, r.verdict));
            rows.push(json!({ "record": r, "status": status }));
        }
        if !summary.errata.is_empty() {
            text.push_str("errata:\n");
            for e in &summary.errata {
                text.push_str(&format!(
                    "  {}: {}\n    displayed {:?}\n    corrected {:?}\n",
                    e.id, e.note, e.displayed_coeffs, e.corrected_coeffs
                ));
            }
        }
        text.push_str(&format!(
            "{} records, {} failing; negated generators {:?}\n",
            summary.records.len(),
            failures,
            summary.search.flipped.iter().map(|g| g.name()).collect::<Vec<_>>()
        ));
        Ok(Report {
            command: String::new(),
            results: json!({
                "sign_search": summary.search,
                "records": rows,
                "errata": summary.errata,
            }),
            checks: vec![Check::new(
                format!("{} relations in group {}", summary.records.len(), self.config.group),
                failures == 0,
            )],
            text,
            csv,
        })
    }

    fn discover_cmd(&mut self, support: Option<&str>, degree: Option<u32>, id: Option<&str>) -> Result<Report> {
        let max = self.config.max_degree;
        if let Some(src) = support {
            let expr = FormalExpr::parse(src).map_err(|e| config_error(format!("support: {e}")))?;
            let n = degree.ok_or_else(|| config_error("--support needs --degree"))?;
            let cx = if n <= max { Some(self.complex(max)?) } else { None };
            let basis = discover_relation(&expr.terms, n, &self.gens, cx.as_ref()).map_err(config_error)?;
            let text = format!("support {expr} in degree {n}\nsolution basis {basis:?}\n");
            let csv = basis
                .iter()
                .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",") + "\n")
                .collect();
            return Ok(Report {
                command: String::new(),
                results: json!({ "degree": n, "support": expr.to_string(), "solution_basis": basis }),
                checks: Vec::new(),
                text,
                csv,
            });
        }
        let cx = self.complex(max)?;
        let records: Vec<RelationRecord> = relation_catalog()
            .into_iter()
            .filter(|r| match id {
                Some(id) => r.id == id,
                None => r.group == Group::I,
            })
            .collect();
        if records.is_empty() {
            return Err(config_error(format!("no relation with id {id:?}")));
        }
        let mut rows = Vec::new();
        let mut text = String::new();
        let mut csv = String::from("id,degree,dimension,verdict\n");
        for r in &records {
            match discover_for_record(r, &self.gens, Some(&cx)) {
                Ok(d) => {
                    text.push_str(&format!(
                        "{}: {} solutions, paper {:?}\n",
                        r.id,
                        d.solution_basis.len(),
                        d.paper_verdict
                    ));
                    csv.push_str(&format!(
                        "{},{},{},{:?}\n",
                        r.id,
                        d.degree,
                        d.solution_basis.len(),
                        d.paper_verdict
                    ));
                    rows.push(json!({ "id": r.id, "result": d }));
                }
                Err(e) => {
                    text.push_str(&format!("{}: {e}\n", r.id));
                    csv.push_str(&format!("{},{},,{e}\n", r.id, r.degree));
                    rows.push(json!({ "id": r.id, "error": e }));
                }
            }
        }
        Ok(Report {
            command: String::new(),
            results: Value::Array(rows),
            checks: Vec::new(),
            text,
            csv,
        })
    }

    fn table40_cmd(&self) -> Report {
        let rows = table40_report(&self.gens);
        let mut text = String::new();
        let mut csv = String::from("q,row_sign,non_exact_forms\n");
        for r in &rows {
            let odd: Vec<&str> = r
                .expressions
                .iter()
                .filter(|e| !e.verdict.is_exact())
                .map(|e| e.displayed.as_str())
                .collect();
            text.push_str(&format!(
                "{:<16} sign {:>2}  ∂Q = {}  ∂²Q = {}\n",
                r.q,
                r.row_sign.map(|s| s.to_string()).unwrap_or_else(|| "?".into()),
                r.machine_first,
                r.machine_second
            ));
            for e in r.expressions.iter().filter(|e| !e.verdict.is_exact()) {
                text.push_str(&format!("    errata: {} -> {:?}\n", e.displayed, e.verdict));
            }
            csv.push_str(&format!(
                "{},{},{}\n",
                r.q,
                r.row_sign.map(|s| s.to_string()).unwrap_or_default(),
                odd.join(";")
            ));
        }
        let ok = rows.iter().all(|r| r.row_sign.is_some());
        Report {
            command: String::new(),
            results: serde_json::to_value(&rows).expect("serializable"),
            checks: vec![Check::new("every row matches up to one sign", ok)],
            text,
            csv,
        }
    }

    fn spectral_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let page = Page::parse(&self.config.page)
            .ok_or_else(|| config_error(format!("bad page {:?}", self.config.page)))?;
        let scheme = self.scheme();
        let cx = self.complex(max)?;
        let eng = SpectralEngine::new(&cx, scheme, max);
        let table = eng.page(page);
        let vs_inf = eng.page(Page::Infinity);
        let mismatches = table.mismatches(&vs_inf);
        let claims: Vec<PageComparison> = match scheme {
            FiltrationScheme::WeightS3 => vec![
                page_equality_check(&eng, Page::Finite(1), Page::Finite(3)),
                page_equality_check(&eng, Page::Finite(4), Page::Finite(6)),
                collapse_check(&eng, 7),
            ],
            FiltrationScheme::MayS5 => vec![collapse_check(&eng, 3)],
            FiltrationScheme::Trivial => vec![collapse_check(&eng, 1)],
        };
        let h = cx.homology_dims();
        let converges = (0..=max).all(|n| vs_inf.total(n) == h[n as usize]);
        let compat = SpectralEngine::compatibility_violations(&cx, scheme, max);
        let survey = jump_survey(&cx, &eng);
        let mut checks = vec![
            Check::new("d preserves the filtration", compat == 0),
            Check::new("sum over p of E_inf equals H", converges),
        ];
        for c in &claims {
            checks.push(Check::new(format!("E_{} = E_{}", c.left.label(), c.right.label()), c.passed()));
        }
        let mut text = format!(
            "{} page {}: collapsed at E_{}; differentials nonzero on pages {:?}\n",
            scheme.name(),
            page.label(),
            eng.collapsed_at(),
            survey.nonzero_pages
        );
        text.push_str(&table.to_csv());
        Ok(Report {
            command: String::new(),
            results: json!({
                "scheme": scheme.name(),
                "page": page.label(),
                "collapsed_at": eng.collapsed_at(),
                "mismatches": mismatches,
                "claims": claims,
                "jumps": survey,
                "grid": table.dims,
            }),
            checks,
            text,
            csv: table.to_csv(),
        })
    }

    fn ideal_cmd(&mut self) -> Result<Report> {
        let max = self.config.max_degree;
        let cx = self.complex(max)?;
        let r = ideal_and_split_check(&cx, &self.gens, max);
        let mut text = format!(
            "{} products of D-side classes with generators, {} failures\n{} products of C-side classes, {} failures\n",
            r.ideal_products,
            r.ideal_failures.len(),
            r.split_products,
            r.split_failures.len()
        );
        for f in r.ideal_failures.iter().chain(&r.split_failures) {
            text.push_str(&format!("    {f}\n"));
        }
        let csv = format!(
            "kind,products,failures\nideal,{},{}\nsplit,{},{}\n",
            r.ideal_products,
            r.ideal_failures.len(),
            r.split_products,
            r.split_failures.len()
        );
        Ok(Report {
            command: String::new(),
            checks: vec![
                Check::new("D-side classes form an ideal", r.ideal_failures.is_empty()),
                Check::new("C-side products are exact in S", r.split_failures.is_empty()),
            ],
            results: serde_json::to_value(&r).expect("serializable"),
            text,
            csv,
        })
    }
}
