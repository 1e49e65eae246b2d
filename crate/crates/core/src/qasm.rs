//! Text serialization for circuits: a deliberately small QASM-flavored
//! format with deterministic, digit-exact output.
//!
//! Layout:
//!
//! ```text
//! qasm2-subset qubits=3 clbits=3
//! u3 q[0] (1.9106332362490186e0,3.1415926535897931e0,3.1415926535897931e0)
//! cx q[0] q[1]
//! measure q[2] -> c[0]
//! barrier q[0] q[1] q[2]
//! ```
//!
//! One instruction per line; operands first, parenthesized comma-separated
//! angles last.  Angles are printed with 17 significant digits so that
//! export/import round-trips bit-exactly.  Blank lines and `#` comments are
//! accepted on import and never produced on export.

use crate::circuit::Circuit;
use crate::error::CoreError;
use crate::gates::GateKind;

/// Format tag on the first line of every file.
pub const HEADER_TAG: &str = "qasm2-subset";

fn fmt_angle(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serialize a circuit to the textual subset format.
pub fn export(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{HEADER_TAG} qubits={} clbits={}\n",
        circuit.num_qubits(),
        circuit.num_clbits()
    ));
    for ins in circuit.instructions() {
        out.push_str(ins.kind.name());
        for &q in &ins.qubits {
            out.push_str(&format!(" q[{q}]"));
        }
        match ins.kind {
            GateKind::Measure(cl) => out.push_str(&format!(" -> c[{cl}]")),
            GateKind::U3(t, p, l) | GateKind::Cu3(t, p, l) => out.push_str(&format!(
                " ({},{},{})",
                fmt_angle(t),
                fmt_angle(p),
                fmt_angle(l)
            )),
            GateKind::Rz(t) => out.push_str(&format!(" ({})", fmt_angle(t))),
            _ => {}
        }
        out.push('\n');
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> CoreError {
    CoreError::QasmParse {
        line,
        message: message.into(),
    }
}

fn parse_index(token: &str, prefix: char, line: usize) -> Result<usize, CoreError> {
    let body = token
        .strip_prefix(prefix)
        .and_then(|s| s.strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected `{prefix}[index]`, got `{token}`")))?;
    body.parse::<usize>()
        .map_err(|_| err(line, format!("bad index in `{token}`")))
}

fn parse_angles(text: &str, line: usize) -> Result<Vec<f64>, CoreError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(line, format!("malformed parameter list `{text}`")))?;
    inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| err(line, format!("bad angle `{}`", part.trim())))
        })
        .collect()
}

/// Parse the textual subset format back into a circuit.
///
/// Errors carry the 1-based line number of the offending line.
pub fn import(text: &str) -> Result<Circuit, CoreError> {
    let mut lines = text.lines().enumerate();
    let (mut num_qubits, mut num_clbits) = (None, None);
    let header_line = loop {
        match lines.next() {
            Some((i, raw)) => {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                break (i + 1, line.to_string());
            }
            None => return Err(err(1, "empty file: missing header")),
        }
    };
    let (lineno, header) = header_line;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(HEADER_TAG) {
        return Err(err(lineno, format!("first line must start with `{HEADER_TAG}`")));
    }
    for part in parts {
        if let Some(v) = part.strip_prefix("qubits=") {
            num_qubits = Some(
                v.parse::<usize>()
                    .map_err(|_| err(lineno, format!("bad qubit count `{v}`")))?,
            );
        } else if let Some(v) = part.strip_prefix("clbits=") {
            num_clbits = Some(
                v.parse::<usize>()
                    .map_err(|_| err(lineno, format!("bad clbit count `{v}`")))?,
            );
        } else {
            return Err(err(lineno, format!("unknown header field `{part}`")));
        }
    }
    let num_qubits = num_qubits.ok_or_else(|| err(lineno, "header missing `qubits=`"))?;
    let num_clbits = num_clbits.unwrap_or(0);
    let mut circuit = Circuit::new(num_qubits, num_clbits);

    for (i, raw) in lines {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens: Vec<&str> = line.split_whitespace().collect();
        let name = tokens.remove(0);

        // Parameter group, if present, is the final token(s) starting at '('.
        let mut angles = Vec::new();
        if let Some(pos) = tokens.iter().position(|t| t.starts_with('(')) {
            let group = tokens.split_off(pos).join(" ");
            angles = parse_angles(&group, lineno)?;
        }

        let want = |n: usize| -> Result<(), CoreError> {
            if angles.len() == n {
                Ok(())
            } else {
                Err(err(
                    lineno,
                    format!("`{name}` takes {n} angle(s), got {}", angles.len()),
                ))
            }
        };

        let mut clbit = None;
        if let Some(pos) = tokens.iter().position(|&t| t == "->") {
            if pos + 2 != tokens.len() {
                return Err(err(lineno, "expected `-> c[index]` at end of line"));
            }
            clbit = Some(parse_index(tokens[pos + 1], 'c', lineno)?);
            tokens.truncate(pos);
        }

        let qubits: Vec<usize> = tokens
            .iter()
            .map(|t| parse_index(t, 'q', lineno))
            .collect::<Result<_, _>>()?;

        let kind = match name {
            "u3" => {
                want(3)?;
                GateKind::U3(angles[0], angles[1], angles[2])
            }
            "rz" => {
                want(1)?;
                GateKind::Rz(angles[0])
            }
            "sx" => {
                want(0)?;
                GateKind::Sx
            }
            "x" => {
                want(0)?;
                GateKind::X
            }
            "h" => {
                want(0)?;
                GateKind::H
            }
            "cx" => {
                want(0)?;
                GateKind::Cnot
            }
            "ch" => {
                want(0)?;
                GateKind::Ch
            }
            "ccx" => {
                want(0)?;
                GateKind::Ccx
            }
            "cu3" => {
                want(3)?;
                GateKind::Cu3(angles[0], angles[1], angles[2])
            }
            "swap" => {
                want(0)?;
                GateKind::Swap
            }
            "measure" => {
                want(0)?;
                let cl = clbit.ok_or_else(|| err(lineno, "`measure` needs `-> c[index]`"))?;
                GateKind::Measure(cl)
            }
            "reset" => {
                want(0)?;
                GateKind::Reset
            }
            "barrier" => {
                want(0)?;
                GateKind::Barrier
            }
            other => return Err(err(lineno, format!("unknown gate `{other}`"))),
        };
        if clbit.is_some() && !matches!(kind, GateKind::Measure(_)) {
            return Err(err(lineno, format!("`{name}` takes no classical bit")));
        }
        circuit
            .try_push(kind, &qubits)
            .map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.u3(1.9106332362490184, PI, PI, 0);
        c.cx(0, 1);
        c.ch(1, 0);
        c.ccx(1, 2, 0);
        c.cu3(1.230959417340775, 0.0, PI, 1, 2);
        c.rz(-0.1234567890123456789, 2);
        c.sx(1);
        c.barrier_all();
        c.reset(2);
        c.measure_all();
        c
    }

    #[test]
    fn roundtrip_is_exact() {
        let c = sample();
        let text = export(&c);
        let back = import(&text).unwrap();
        assert_eq!(c, back);
        // Bit-exact determinism of the text itself.
        assert_eq!(text, export(&back));
    }

    #[test]
    fn header_and_digit_format() {
        let text = export(&sample());
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "qasm2-subset qubits=3 clbits=3");
        let u3_line = lines.next().unwrap();
        assert!(u3_line.starts_with("u3 q[0] ("), "{u3_line}");
        // 17 significant digits: mantissa `d.` plus 16 digits.
        assert!(u3_line.contains("1.9106332362490184e0"), "{u3_line}");
        assert!(u3_line.contains("3.1415926535897931e0"), "{u3_line}");
    }

    #[test]
    fn import_reports_line_numbers() {
        let text = "qasm2-subset qubits=2 clbits=0\ncx q[0] q[1]\nbogus q[0]\n";
        match import(text) {
            Err(CoreError::QasmParse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("bogus"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn import_rejects_bad_operands() {
        let bad = [
            ("qasm2-subset qubits=2 clbits=0\ncx q[0]\n", 2),
            ("qasm2-subset qubits=2 clbits=0\ncx q[0] q[5]\n", 2),
            ("qasm2-subset qubits=2 clbits=0\nrz q[0] (a)\n", 2),
            ("qasm2-subset qubits=2 clbits=0\nmeasure q[0]\n", 2),
            ("qasm2-subset qubits=2\nmeasure q[0] -> c[0]\n", 2),
            ("nonsense qubits=2\n", 1),
        ];
        for (text, want_line) in bad {
            match import(text) {
                Err(CoreError::QasmParse { line, .. }) => assert_eq!(line, want_line, "{text}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let text = "# a comment\n\nqasm2-subset qubits=1 clbits=0\n# another\nsx q[0]\n\n";
        let c = import(text).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.count("sx"), 1);
    }
}
