use std::fmt;

use num_traits::Float;

use super::halstead::HalsteadReport;

pub const CSV_HEADER: [&str; 12] = [
    "label", "LOC", "Bytes", "eta1", "eta2", "N1", "N2", "N1/N2", "N_T", "Delta_N", "lambda", "B",
];

fn f1<F: Float>(x: F) -> String {
    format!("{:.1}", x.to_f64().unwrap_or(f64::NAN))
}

/// One CSV row per report, in the order given.
pub fn report_csv<F: Float>(reports: &[(String, HalsteadReport<F>)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("write to memory");
    for (label, r) in reports {
        let c = &r.counts;
        let row = [
            label.clone(),
            c.loc.to_string(),
            c.bytes.to_string(),
            c.eta1.to_string(),
            c.eta2.to_string(),
            c.n1.to_string(),
            c.n2.to_string(),
            r.ratio.map(f1).unwrap_or_default(),
            f1(r.estimated_length),
            format!("{:.0}", r.delta_n.to_f64().unwrap_or(f64::NAN)),
            f1(r.lambda),
            f1(r.bugs),
        ];
        w.write_record(&row).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

impl<F: Float + fmt::Display> fmt::Display for HalsteadReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        writeln!(f, "eta1 = {}  eta2 = {}  N1 = {}  N2 = {}", c.eta1, c.eta2, c.n1, c.n2)?;
        if c.loc > 0 || c.bytes > 0 {
            writeln!(f, "LOC = {}  Bytes = {}", c.loc, c.bytes)?;
        }
        writeln!(f, "N = {}  eta = {}", self.length, self.vocabulary)?;
        writeln!(f, "V = {:.2}", self.volume)?;
        writeln!(f, "N_T = {:.1}", self.estimated_length)?;
        writeln!(f, "Delta_N = {:.0}%", self.delta_n)?;
        writeln!(f, "L = {:.3}  lambda = {:.1}", self.level, self.lambda)?;
        writeln!(f, "B = {:.1}", self.bugs)?;
        match self.ratio {
            Some(r) => write!(f, "N1/N2 = {r:.1}"),
            None => write!(f, "N1/N2 = n/a"),
        }
    }
}
