//! Deterministic text output: JSON with 17 significant digits per float,
//! and the CSV layouts.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use nodoid_core::certify::SweepReport;

/// Compact JSON whose floats carry exactly 17 significant digits.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(f17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `x` in scientific notation with 17 significant digits.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
}

pub fn write_json<W: Write, T: Serialize>(w: &mut W, value: &T) -> io::Result<()> {
    let mut ser = Serializer::with_formatter(&mut *w, Sig17);
    value.serialize(&mut ser).map_err(io::Error::from)?;
    w.write_all(b"\n")
}

pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// `beta,R,area,volume,supH,infH` rows, then a `#` comment line with the
/// fitted convergence exponents.
pub fn write_sweep_csv<W: Write>(w: W, rep: &SweepReport) -> io::Result<()> {
    let mut cw = csv_writer(w);
    cw.write_record(["beta", "R", "area", "volume", "supH", "infH"])?;
    for r in &rep.rows {
        cw.write_record([
            f17(r.beta),
            f17(r.r),
            f17(r.area),
            f17(r.volume),
            f17(r.sup_abs_h),
            f17(r.inf_h),
        ])?;
    }
    cw.flush()?;
    let mut inner = cw
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    let o = &rep.orders;
    let f = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), f17);
    writeln!(
        inner,
        "# orders: R={} area={} volume={} infH={}",
        f(o.r),
        f(o.area),
        f(o.volume),
        f(o.inf_h)
    )?;
    inner.flush()
}
