//! File formats. All floats are written with 17 significant digits so that
//! values survive a write/read round trip bit for bit and reruns produce
//! byte-identical artifacts.

use std::path::Path;

use rustfft::num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Signal};
use crate::symbols::{Interval, IntervalCollection};

/// `1.2339999999999999e0` style: sign, one leading digit, 16 fractional
/// digits, decimal exponent.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn signal_to_json(f: &Signal) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{{\"n\": {}, \"dx\": {}, \"re\": [",
        f.grid().n(),
        fmt_g17(f.grid().dx())
    ));
    push_floats(&mut out, f.data().iter().map(|z| z.re));
    out.push_str("], \"im\": [");
    push_floats(&mut out, f.data().iter().map(|z| z.im));
    out.push_str("]}\n");
    out
}

fn push_floats(out: &mut String, values: impl Iterator<Item = f64>) {
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_g17(v));
    }
}

#[derive(Deserialize)]
struct SignalFile {
    n: usize,
    dx: f64,
    re: Vec<f64>,
    im: Vec<f64>,
}

pub fn signal_from_json(text: &str) -> Result<Signal> {
    let file: SignalFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("signal json: {e}")))?;
    if file.re.len() != file.n || file.im.len() != file.n {
        return Err(Error::Format(format!(
            "signal json: n = {} but re/im have lengths {}/{}",
            file.n,
            file.re.len(),
            file.im.len()
        )));
    }
    let grid = Grid::new(file.n, file.dx)?;
    Signal::new(
        grid,
        file.re
            .iter()
            .zip(&file.im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect(),
    )
}

pub fn write_signal(path: &Path, f: &Signal) -> Result<()> {
    std::fs::write(path, signal_to_json(f))?;
    Ok(())
}

pub fn read_signal(path: &Path) -> Result<Signal> {
    signal_from_json(&std::fs::read_to_string(path)?)
}

pub fn intervals_to_json(c: &IntervalCollection) -> String {
    let mut out = String::from("{\"intervals\": [");
    for (i, iv) in c.intervals().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format!("[{}, {}]", fmt_g17(iv.lo), fmt_g17(iv.hi)));
    }
    out.push_str("]}\n");
    out
}

#[derive(Deserialize)]
struct IntervalFile {
    intervals: Vec<(f64, f64)>,
}

pub fn intervals_from_json(text: &str) -> Result<IntervalCollection> {
    let file: IntervalFile =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("interval json: {e}")))?;
    IntervalCollection::new(
        file.intervals
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<_>>()?,
    )
}

pub fn write_intervals(path: &Path, c: &IntervalCollection) -> Result<()> {
    std::fs::write(path, intervals_to_json(c))?;
    Ok(())
}

pub fn read_intervals(path: &Path) -> Result<IntervalCollection> {
    intervals_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_floats_round_trip() {
        for &x in &[0.1, 1.0, -2.5e-17, 3.0 / 7.0, 1e300, -0.0, 123456.789] {
            let s = fmt_g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn signal_json_round_trips_bit_for_bit() {
        let g = Grid::new(8, 0.125).unwrap();
        let r = crate::rng::CounterRng::new(3, 0);
        let f = Signal::new(
            g,
            (0..8u64)
                .map(|i| Complex64::new(r.normal_at(2 * i), r.normal_at(2 * i + 1)))
                .collect(),
        )
        .unwrap();
        let text = signal_to_json(&f);
        let back = signal_from_json(&text).unwrap();
        assert!(back.grid().same_as(f.grid()));
        for (a, b) in back.data().iter().zip(f.data()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        // writing twice gives identical bytes
        assert_eq!(text, signal_to_json(&f));
    }

    #[test]
    fn malformed_signal_json_is_reported() {
        assert!(matches!(
            signal_from_json("{\"n\": 4, \"dx\": 1.0, \"re\": [1, 2], \"im\": [0, 0]}"),
            Err(Error::Format(_))
        ));
        assert!(matches!(signal_from_json("not json"), Err(Error::Format(_))));
    }

    #[test]
    fn interval_json_round_trips() {
        let c = IntervalCollection::new(vec![
            Interval::new(-2.0, -1.0).unwrap(),
            Interval::new(0.5, 1.5).unwrap(),
        ])
        .unwrap();
        let text = intervals_to_json(&c);
        let back = intervals_from_json(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back.intervals()[0].lo, -2.0);
        assert_eq!(back.intervals()[1].hi, 1.5);
    }
}
