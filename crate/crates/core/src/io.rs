//! Output encodings shared by the library and the command-line tool.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), both in CSV
//! cells and in JSON documents, so that every emitted value round-trips and
//! repeated runs produce identical bytes.

use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON formatter that prints every `f64` with 17 significant digits.
#[derive(Default)]
pub struct SigDigitsFormatter<F = CompactFormatter> {
    inner: F,
}

macro_rules! forward {
    ($($name:ident($($arg:ident : $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl<F: Formatter> Formatter for SigDigitsFormatter<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

fn encode<T: Serialize + ?Sized, F: Formatter>(value: &T, formatter: F) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter { inner: formatter });
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    encode(value, CompactFormatter)
}

pub fn to_json_string_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    encode(value, PrettyFormatter::new())
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// `[re, im]` pair as used in JSON documents.
pub fn complex_to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}
