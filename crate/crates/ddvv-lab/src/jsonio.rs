//! Deterministic JSON emission.
//!
//! Reports and near-extremal configurations are meant to be re-ingested and
//! diffed byte-for-byte, so every float is printed in scientific notation
//! with 17 significant digits — enough that parsing the text recovers the
//! exact binary64 value. Serialization of the same value is therefore
//! byte-identical across runs, platforms, and worker counts.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON formatter that prints every `f64` with 17 significant
/// digits (`{:.16e}`), the minimum that guarantees a lossless round-trip.
#[derive(Clone, Copy, Debug, Default)]
pub struct Float17Formatter;

impl Formatter for Float17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a value to a compact JSON string with 17-digit floats.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17Formatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization does not fail");
    String::from_utf8(out).expect("serde_json emits valid UTF-8")
}

/// Serializes a value as JSON with 17-digit floats directly to a writer.
pub fn to_writer<W: io::Write, T: Serialize>(writer: W, value: &T) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(writer, Float17Formatter);
    value.serialize(&mut ser).map_err(io::Error::other)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let values = [
            0.1,
            -0.0,
            std::f64::consts::PI,
            1e-300,
            -9.87654321e250,
            2.0_f64.powi(-52),
            16.0,
        ];
        for &v in &values {
            let text = to_string(&v);
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "value {v} via {text}");
        }
    }

    #[test]
    fn nested_structures_round_trip() {
        let value = vec![vec![1.0 / 3.0, 2.0 / 7.0], vec![-1e-17, 16.0]];
        let text = to_string(&value);
        let back: Vec<Vec<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(value, back);
    }

    #[test]
    fn serialization_is_deterministic() {
        #[derive(Serialize)]
        struct Report {
            lhs: f64,
            rhs: f64,
            pass: bool,
        }
        let r = Report {
            lhs: 16.0,
            rhs: 16.0 - 1e-13,
            pass: true,
        };
        assert_eq!(to_string(&r), to_string(&r));
    }
}
