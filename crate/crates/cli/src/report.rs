use std::fmt::Write;

use ihm_core::bounds::{BoundsRow, HongLoewy, SmithCheck};
use ihm_core::search::SearchReport;
use serde::{Deserialize, Serialize};

/// `Y₀`, `Z₀` and their inverses; exact entries are decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub lambda_min: f64,
    /// The closed forms multiply `Y₀` and `Z₀` to the identity.
    pub closed_forms_exact: bool,
    pub sign_pattern: bool,
    /// `None` above the size where the check is run.
    pub trace_equality: Option<bool>,
    pub fibonacci_attained: bool,
    pub y0: Vec<Vec<String>>,
    pub y0_inverse: Vec<Vec<String>>,
    pub z0: Vec<Vec<String>>,
    pub z0_inverse: Vec<Vec<String>>,
}

impl ExtremalReport {
    pub fn all_checks_pass(&self) -> bool {
        self.closed_forms_exact
            && self.sign_pattern
            && self.fibonacci_attained
            && self.trace_equality != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Rows up to this `n` carry an exhaustive `c_n`; later rows use `λ_min(Z₀)`.
    pub exhaustive_max_n: usize,
    pub rows: Vec<BoundsRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmithReport {
    pub det: String,
    pub totient_product: String,
    pub equal: bool,
}

impl From<SmithCheck> for SmithReport {
    fn from(s: SmithCheck) -> Self {
        SmithReport {
            det: s.det.to_string(),
            totient_product: s.totient_product.to_string(),
            equal: s.equal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GcdReport {
    pub set: Vec<u64>,
    pub eps: f64,
    pub c_n: f64,
    /// `c_n` came from a scan rather than from `λ_min(Z₀)`.
    pub c_n_exhaustive: bool,
    pub hong_loewy: HongLoewy,
    /// Present when the set is factor-closed.
    pub smith: Option<SmithReport>,
    pub smith_skipped: Option<String>,
}

pub(crate) trait Render: Serialize {
    fn csv(&self) -> Result<String, csv::Error>;
    fn text(&self) -> String;
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

#[derive(Serialize)]
struct SearchCsv<'a> {
    n: usize,
    total_scanned: u64,
    c_n_estimate: f64,
    argmin_indices: &'a str,
    z0_value: f64,
    conjecture_holds: bool,
    unique_argmin: bool,
    elapsed: f64,
    blocks_completed: u64,
}

impl Render for SearchReport {
    fn csv(&self) -> Result<String, csv::Error> {
        let argmin = join(&self.argmin_indices, ";");
        csv_rows([SearchCsv {
            n: self.n,
            total_scanned: self.total_scanned,
            c_n_estimate: self.c_n_estimate,
            argmin_indices: &argmin,
            z0_value: self.z0_value,
            conjecture_holds: self.conjecture_holds,
            unique_argmin: self.unique_argmin,
            elapsed: self.elapsed,
            blocks_completed: self.blocks_completed,
        }])
    }

    fn text(&self) -> String {
        format!(
            "n                  {}\nmatrices scanned   {}\nc_n                {:.15}\nlambda_min(Z0)     {:.15}\nargmin indices     {}\nconjecture holds   {}\nunique minimizer   {}\nblocks completed   {}\nelapsed            {:.3} s\n",
            self.n,
            self.total_scanned,
            self.c_n_estimate,
            self.z0_value,
            join(&self.argmin_indices, ", "),
            self.conjecture_holds,
            self.unique_argmin,
            self.blocks_completed,
            self.elapsed
        )
    }
}

#[derive(Serialize)]
struct ExtremalCsv {
    n: usize,
    lambda_min: f64,
    closed_forms_exact: bool,
    sign_pattern: bool,
    trace_equality: Option<bool>,
    fibonacci_attained: bool,
}

fn write_matrix(out: &mut String, name: &str, rows: &[Vec<String>]) {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "{name}:");
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

impl Render for ExtremalReport {
    fn csv(&self) -> Result<String, csv::Error> {
        csv_rows([ExtremalCsv {
            n: self.n,
            lambda_min: self.lambda_min,
            closed_forms_exact: self.closed_forms_exact,
            sign_pattern: self.sign_pattern,
            trace_equality: self.trace_equality,
            fibonacci_attained: self.fibonacci_attained,
        }])
    }

    fn text(&self) -> String {
        let mut out = String::new();
        for (name, m) in [
            ("Y0", &self.y0),
            ("Y0^-1", &self.y0_inverse),
            ("Z0", &self.z0),
            ("Z0^-1", &self.z0_inverse),
        ] {
            write_matrix(&mut out, name, m);
        }
        let trace = self
            .trace_equality
            .map_or("skipped".to_string(), |b| b.to_string());
        let _ = write!(
            out,
            "lambda_min(Z0)      {:.15e}\nclosed forms exact  {}\nsign pattern        {}\ntrace equality      {}\nfibonacci attained  {}\n",
            self.lambda_min, self.closed_forms_exact, self.sign_pattern, trace, self.fibonacci_attained
        );
        out
    }
}

impl Render for BoundsReport {
    fn csv(&self) -> Result<String, csv::Error> {
        csv_rows(&self.rows)
    }

    fn text(&self) -> String {
        let mut out = format!(
            "{:>3}  {:>22}  {:>22}  {:>22}  holds\n",
            "n", "c_n", "mattila_general", "mattila_parity"
        );
        for r in &self.rows {
            let c = r.c_n.map_or("-".to_string(), |c| format!("{c:.15e}"));
            let holds = r.holds.map_or("-".to_string(), |h| h.to_string());
            let _ = writeln!(
                out,
                "{:>3}  {c:>22}  {:>22.15e}  {:>22.15e}  {holds}",
                r.n, r.mattila_general, r.mattila_parity
            );
        }
        out
    }
}

#[derive(Serialize)]
struct GcdCsv<'a> {
    set: &'a str,
    eps: f64,
    c_n: f64,
    c_n_exhaustive: bool,
    lambda_min: f64,
    hong_loewy_bound: f64,
    hong_loewy_holds: bool,
    smith_det: Option<&'a str>,
    smith_totient_product: Option<&'a str>,
    smith_equal: Option<bool>,
}

impl Render for GcdReport {
    fn csv(&self) -> Result<String, csv::Error> {
        let set = join(&self.set, ";");
        csv_rows([GcdCsv {
            set: &set,
            eps: self.eps,
            c_n: self.c_n,
            c_n_exhaustive: self.c_n_exhaustive,
            lambda_min: self.hong_loewy.lambda_min,
            hong_loewy_bound: self.hong_loewy.bound,
            hong_loewy_holds: self.hong_loewy.holds,
            smith_det: self.smith.as_ref().map(|s| s.det.as_str()),
            smith_totient_product: self.smith.as_ref().map(|s| s.totient_product.as_str()),
            smith_equal: self.smith.as_ref().map(|s| s.equal),
        }])
    }

    fn text(&self) -> String {
        let mut out = format!(
            "set                 {}\neps                 {}\nc_n                 {:.15} ({})\nlambda_min          {:.15}\nhong-loewy bound    {:.15}\nhong-loewy holds    {}\n",
            join(&self.set, ", "),
            self.eps,
            self.c_n,
            if self.c_n_exhaustive { "exhaustive" } else { "lambda_min(Z0)" },
            self.hong_loewy.lambda_min,
            self.hong_loewy.bound,
            self.hong_loewy.holds
        );
        match (&self.smith, &self.smith_skipped) {
            (Some(s), _) => {
                let _ = write!(
                    out,
                    "smith det           {}\ntotient product     {}\nsmith equal         {}\n",
                    s.det, s.totient_product, s.equal
                );
            }
            (None, Some(reason)) => {
                let _ = writeln!(out, "smith               skipped: {reason}");
            }
            (None, None) => {}
        }
        out
    }
}
