use std::io::Write;

/// Float formatting used in every CSV: 17 significant digits, enough for
/// the printed value to parse back to the same `f64`. Negative zero prints
/// as zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// A CSV table held in memory until it is written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Sweep and decompose column order.
pub const DECOMPOSITION_HEADER: [&str; 8] = [
    "cap",
    "delta_nw",
    "comp_i",
    "comp_ii",
    "comp_iii",
    "avg_h_before",
    "avg_h_after",
    "avg_h_decreased",
];

pub fn decomposition_row(r: &halstd_core::policy::DecompositionReport) -> Vec<String> {
    vec![
        num(r.cap),
        num(r.delta_nw),
        num(r.comp_i),
        num(r.comp_ii),
        num(r.comp_iii),
        num(r.avg_h_before),
        num(r.avg_h_after),
        r.avg_h_decreased.to_string(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.0] {
            let s = num(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{s}");
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(-0.0), num(0.0));
    }

    #[test]
    fn quoting_ids() {
        let mut t = Table::new(&["id", "x"]);
        t.push(vec!["a,b".into(), num(1.0)]);
        assert_eq!(t.to_csv(), "id,x\n\"a,b\",1.0000000000000000e0\n");
    }
}
