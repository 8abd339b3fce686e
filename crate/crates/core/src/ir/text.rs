//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 6
//! CX 0 1
//! MCX 0 1 2 3 4 ; 5
//! U 3 [0+0i 1+0i 1+0i 0+0i]
//! MCU 0 1 ; 2 [1+0i 0+0i 0+0i 1+0i]
//! PHASE 0.5
//! ```
//!
//! `#` starts a comment. A gate line may end with `@name` to carry the
//! gate's label. Matrix payloads are row-major.

use std::fmt::Write as _;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::text::{format_complex, format_real, parse_complex, parse_real};
use crate::linalg::{Mat2, UNITARY_TOLERANCE};

fn payload(u: &Mat2) -> String {
    let entries: Vec<String> = u.0.iter().map(|z| format_complex(*z)).collect();
    format!("[{}]", entries.join(" "))
}

fn join(qubits: &[usize]) -> String {
    qubits.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
}

fn gate_line(g: &Gate) -> String {
    let body = match g {
        Gate::Cnot { control, target } => format!("CX {control} {target}"),
        Gate::MultiControlled { controls, target, u, .. } if *u == Mat2::X => {
            format!("MCX {} ; {target}", join(controls)).replace("MCX  ;", "MCX ;")
        }
        Gate::MultiControlled { controls, target, u, .. } => {
            format!("MCU {} ; {target} {}", join(controls), payload(u)).replace("MCU  ;", "MCU ;")
        }
        Gate::SingleQubit { target, u, .. } => format!("U {target} {}", payload(u)),
        Gate::GlobalPhase { phi } => format!("PHASE {}", format_real(*phi)),
    };
    match g.label() {
        Some(label) => format!("{body} @{label}"),
        None => body,
    }
}

/// Canonical text form of a valid circuit.
pub fn serialize_circuit(c: &Circuit) -> Result<String> {
    c.check()?;
    let mut out = format!("qubits {}\n", c.num_qubits);
    for g in &c.gates {
        let _ = writeln!(out, "{}", gate_line(g));
    }
    Ok(out)
}

fn parse_index(tok: &str, line: usize, num_qubits: usize) -> Result<usize> {
    let q: usize = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid qubit index `{tok}`")))?;
    if q >= num_qubits {
        return Err(Error::parse(line, "qubit index out of range"));
    }
    Ok(q)
}

fn parse_payload(text: &str, line: usize) -> Result<Mat2> {
    let entries = text
        .split_whitespace()
        .map(|t| parse_complex(t).ok_or_else(|| Error::parse(line, format!("bad complex literal `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    let entries: [_; 4] = entries
        .try_into()
        .map_err(|v: Vec<_>| Error::parse(line, format!("matrix payload needs 4 entries, found {}", v.len())))?;
    let u = Mat2(entries);
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOLERANCE {
        return Err(Error::parse(line, format!("non-unitary matrix payload (residual {residual:e})")));
    }
    Ok(u)
}

/// Splits `c1 c2 ; t` into controls and target.
fn parse_controlled(tokens: &[&str], line: usize, n: usize) -> Result<(Vec<usize>, usize)> {
    let sep = tokens
        .iter()
        .position(|t| *t == ";")
        .ok_or_else(|| Error::parse(line, "expected `;` before the target"))?;
    let controls = tokens[..sep]
        .iter()
        .map(|t| parse_index(t, line, n))
        .collect::<Result<Vec<_>>>()?;
    match &tokens[sep + 1..] {
        [t] => Ok((controls, parse_index(t, line, n)?)),
        _ => Err(Error::parse(line, "expected exactly one target after `;`")),
    }
}

fn parse_gate(body: &str, line: usize, n: usize) -> Result<Gate> {
    let (body, label) = match body.rsplit_once('@') {
        Some((head, label)) if !label.trim().is_empty() && !label.contains(char::is_whitespace) => {
            (head, Some(label.to_string()))
        }
        Some(_) => return Err(Error::parse(line, "malformed label")),
        None => (body, None),
    };
    let (head, matrix) = match body.split_once('[') {
        Some((head, rest)) => {
            let inner = rest
                .strip_suffix(']')
                .or_else(|| rest.trim_end().strip_suffix(']'))
                .ok_or_else(|| Error::parse(line, "unterminated matrix payload"))?;
            (head, Some(parse_payload(inner, line)?))
        }
        None => (body, None),
    };
    let head = head.replace(';', " ; ");
    let tokens: Vec<&str> = head.split_whitespace().collect();
    let (op, args) = tokens.split_first().ok_or_else(|| Error::parse(line, "empty gate"))?;
    let gate = match (*op, matrix) {
        ("CX", None) => match args {
            [c, t] => Gate::cnot(parse_index(c, line, n)?, parse_index(t, line, n)?),
            _ => return Err(Error::parse(line, "CX takes a control and a target")),
        },
        ("MCX", None) => {
            let (controls, target) = parse_controlled(args, line, n)?;
            Gate::mcx(controls, target)
        }
        ("MCU", Some(u)) => {
            let (controls, target) = parse_controlled(args, line, n)?;
            Gate::controlled(controls, target, u)
        }
        ("U", Some(u)) => match args {
            [t] => Gate::single(parse_index(t, line, n)?, u),
            _ => return Err(Error::parse(line, "U takes one target")),
        },
        ("PHASE", None) => match args {
            [phi] => Gate::GlobalPhase {
                phi: parse_real(phi).ok_or_else(|| Error::parse(line, format!("invalid phase `{phi}`")))?,
            },
            _ => return Err(Error::parse(line, "PHASE takes one angle")),
        },
        ("U" | "MCU", None) => return Err(Error::parse(line, format!("{op} requires a matrix payload"))),
        ("CX" | "MCX" | "PHASE", Some(_)) => return Err(Error::parse(line, format!("{op} takes no matrix payload"))),
        _ => return Err(Error::parse(line, format!("unknown gate `{op}`"))),
    };
    let gate = match label {
        Some(l) if matches!(gate, Gate::SingleQubit { .. } | Gate::MultiControlled { .. }) => gate.labelled(&l),
        Some(_) => return Err(Error::parse(line, format!("{op} cannot carry a label"))),
        None => gate,
    };
    if let Some(message) = gate.violations(n).into_iter().next() {
        return Err(Error::parse(line, message));
    }
    Ok(gate)
}

/// Parses the circuit text format. Errors carry the 1-based line number.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        match &mut circuit {
            None => {
                let n = match body.split_whitespace().collect::<Vec<_>>().as_slice() {
                    ["qubits", n] => n
                        .parse::<usize>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| Error::parse(line, "invalid qubit count"))?,
                    _ => return Err(Error::parse(line, "expected `qubits <n>` header")),
                };
                circuit = Some(Circuit::new(n));
            }
            Some(c) => {
                let gate = parse_gate(body, line, c.num_qubits)?;
                c.push(gate);
            }
        }
    }
    circuit.ok_or_else(|| Error::parse(1, "missing `qubits <n>` header"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary2;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn serializes_documented_lines() {
        assert_eq!(serialize_circuit(&Circuit::new(6)).unwrap(), "qubits 6\n");
        let c = Circuit::with_gates(6, vec![Gate::cnot(0, 1), Gate::mcx(vec![0, 1, 2, 3, 4], 5)]);
        assert_eq!(serialize_circuit(&c).unwrap(), "qubits 6\nCX 0 1\nMCX 0 1 2 3 4 ; 5\n");
        let c = Circuit::with_gates(2, vec![Gate::controlled(vec![], 1, Mat2::hadamard()).labelled("h")]);
        let text = serialize_circuit(&c).unwrap();
        assert!(text.contains("MCU ; 1 ["), "{text}");
        assert!(text.trim_end().ends_with("@h"));
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn refuses_to_serialize_invalid() {
        assert!(serialize_circuit(&Circuit::with_gates(2, vec![Gate::cnot(1, 1)])).is_err());
    }

    #[test]
    fn parses_mcu_with_identity_payload() {
        let c = parse_circuit("qubits 3\nMCU 0 1 ; 2 [1+0i 0+0i 0+0i 1+0i]\n").unwrap();
        assert_eq!(c.gates, vec![Gate::controlled(vec![0, 1], 2, Mat2::IDENTITY)]);
    }

    #[test]
    fn tolerates_comments_and_whitespace() {
        let text = "# header comment\n\n  qubits   3  \nCX   0 2 # trailing\n\tMCX 0;1 2;  1\n";
        let err = parse_circuit(text).unwrap_err();
        assert_eq!(err.to_string(), "expected exactly one target after `;` line 5");
        let c = parse_circuit("qubits 3\n  CX 0   2  # x\nMCX 0 2;1\nPHASE -0.25\n").unwrap();
        assert_eq!(c.gates[1], Gate::mcx(vec![0, 2], 1));
        assert_eq!(c.gates[2], Gate::GlobalPhase { phi: -0.25 });
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let e = parse_circuit("qubits 6\nCX 7 1\n").unwrap_err();
        assert_eq!(e.to_string(), "qubit index out of range line 2");
        let e = parse_circuit("qubits 2\nU 0 [1+0i 1+0i 0+0i 1+0i]\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, ref message } if message.starts_with("non-unitary")));
        assert!(matches!(parse_circuit("CX 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_circuit("qubits 2\n\nFOO 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_circuit("qubits 2\nCX 0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 2\nU 0 [1+0i 0+0i 0+0i\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_circuit(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn payload_roundtrip_is_bit_exact() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let u = random_unitary2(&mut rng);
        let c = Circuit::with_gates(1, vec![Gate::single(0, u)]);
        let back = parse_circuit(&serialize_circuit(&c).unwrap()).unwrap();
        let Gate::SingleQubit { u: v, .. } = &back.gates[0] else { panic!() };
        for (a, b) in u.0.iter().zip(v.0.iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        let unitary = any::<u64>().prop_map(|seed| random_unitary2(&mut rand::rngs::StdRng::seed_from_u64(seed)));
        let label = proptest::option::of("[a-z][a-z0-9_]{0,5}");
        prop_oneof![
            (0..n, unitary.clone(), label.clone()).prop_map(|(t, u, l)| {
                let g = Gate::single(t, u);
                match l { Some(l) => g.labelled(&l), None => g }
            }),
            (Just(()).prop_perturb(move |_, mut rng| {
                let t = rng.random_range(0..n);
                let controls: Vec<usize> = (0..n).filter(|&q| q != t && rng.random_bool(0.5)).collect();
                (controls, t)
            }), unitary, any::<bool>()).prop_map(|((controls, t), u, is_x)| {
                Gate::controlled(controls, t, if is_x { Mat2::X } else { u })
            }),
            (0..n, 1..n).prop_map(move |(c, d)| Gate::cnot(c, (c + d) % n)),
            (-10.0f64..10.0).prop_map(|phi| Gate::GlobalPhase { phi }),
        ]
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(gates in proptest::collection::vec(arb_gate(4), 0..12)) {
            let c = Circuit::with_gates(4, gates);
            let text = serialize_circuit(&c).unwrap();
            prop_assert_eq!(parse_circuit(&text).unwrap(), c);
        }
    }
}
