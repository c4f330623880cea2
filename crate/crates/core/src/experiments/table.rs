//! Result tables and their CSV form.

/// Which CSV schema a table uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `sweep_value,scheme,mean_norm_capacity,std,trials,pswf_bound`
    Saturation,
    /// `sweep_value,estimator,mean_nmse_db,std_db,trials`
    Estimation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_value: f64,
    /// Scheme or estimator name.
    pub label: String,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
    pub bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub kind: TableKind,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn new(kind: TableKind) -> ResultTable {
        ResultTable { kind, rows: Vec::new() }
    }

    pub fn header(&self) -> &'static str {
        match self.kind {
            TableKind::Saturation => "sweep_value,scheme,mean_norm_capacity,std,trials,pswf_bound",
            TableKind::Estimation => "sweep_value,estimator,mean_nmse_db,std_db,trials",
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(self.header());
        out.push('\n');
        for r in &self.rows {
            match self.kind {
                TableKind::Saturation => out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.sweep_value,
                    r.label,
                    r.mean,
                    r.std,
                    r.trials,
                    r.bound.unwrap_or(f64::NAN)
                )),
                TableKind::Estimation => out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.sweep_value, r.label, r.mean, r.std, r.trials
                )),
            }
        }
        out
    }

    /// Distinct labels in first-appearance order.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.label) {
                out.push(r.label.clone());
            }
        }
        out
    }

    /// Rows with `label`, in table order.
    pub fn series(&self, label: &str) -> Vec<&ResultRow> {
        self.rows.iter().filter(|r| r.label == label).collect()
    }

    /// Mean for `(sweep_value, label)`.
    pub fn value(&self, sweep_value: f64, label: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.label == label && r.sweep_value == sweep_value)
            .map(|r| r.mean)
    }

    /// One line per sweep point listing each label's mean.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut points: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !points.contains(&r.sweep_value) {
                points.push(r.sweep_value);
            }
        }
        points
            .iter()
            .map(|&x| {
                let cells: Vec<String> = self
                    .rows
                    .iter()
                    .filter(|r| r.sweep_value == x)
                    .map(|r| format!("{}={:.4}", r.label, r.mean))
                    .collect();
                format!("{x}: {}", cells.join(" "))
            })
            .collect()
    }
}

/// Arithmetic mean and population standard deviation, summed in slice order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}
