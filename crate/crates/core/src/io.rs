//! File formats: the text QUBO format and the JSON metadata sidecar.
//!
//! QUBO files are ASCII with LF newlines:
//!
//! ```text
//! c optional comments
//! p qubo 0 <num_vars> <num_diagonal> <num_offdiagonal>
//! <i> <i> <coeff>   one line per diagonal entry, ascending i
//! <i> <j> <coeff>   one line per off-diagonal entry, i < j, lexicographic
//! ```
//!
//! The constant offset does not fit the matrix format; it travels in the
//! sidecar, which also records the instance, the reduction parameters and
//! the semantic role of every variable so that solver output can be decoded
//! without rebuilding anything from scratch.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::curve::EcdlpInstance;
use crate::error::{Error, Result};
use crate::qubo::QuboInstance;
use crate::reduce::{EquationSystem, VariableRole};

/// Writes the matrix part of an instance in the text format above.
pub fn export_qubo<W: Write>(qubo: &QuboInstance, mut sink: W) -> Result<()> {
    writeln!(
        sink,
        "p qubo 0 {} {} {}",
        qubo.num_vars(),
        qubo.num_linear_terms(),
        qubo.num_quadratic_terms()
    )?;
    for (i, coeff) in qubo.linear() {
        writeln!(sink, "{} {} {}", i, i, coeff)?;
    }
    for ((i, j), coeff) in qubo.quadratic() {
        writeln!(sink, "{} {} {}", i, j, coeff)?;
    }
    Ok(())
}

pub fn export_qubo_to_string(qubo: &QuboInstance) -> String {
    let mut buf = Vec::new();
    export_qubo(qubo, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("output is ASCII")
}

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        msg: msg.into(),
    }
}

/// Parses the text format back into an instance (offset zero; the sidecar
/// carries the offset). Validates the header counts against the body.
pub fn import_qubo<R: BufRead>(source: R) -> Result<QuboInstance> {
    let mut lines = source.lines().enumerate();
    let (header_no, header) = loop {
        match lines.next() {
            None => return Err(parse_error(0, "missing header line")),
            Some((no, line)) => {
                let line = line?;
                let trimmed = line.trim();
                if trimmed.is_empty() || trimmed == "c" || trimmed.starts_with("c ") {
                    continue;
                }
                break (no + 1, line);
            }
        }
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != "p" || fields[1] != "qubo" || fields[2] != "0" {
        return Err(parse_error(
            header_no,
            "expected header \"p qubo 0 <vars> <diag> <offdiag>\"",
        ));
    }
    let num_vars: usize = fields[3]
        .parse()
        .map_err(|_| parse_error(header_no, "bad variable count"))?;
    let n_diag: usize = fields[4]
        .parse()
        .map_err(|_| parse_error(header_no, "bad diagonal count"))?;
    let n_offdiag: usize = fields[5]
        .parse()
        .map_err(|_| parse_error(header_no, "bad off-diagonal count"))?;

    let mut qubo = QuboInstance::new(num_vars);
    let mut seen_diag = 0usize;
    let mut seen_offdiag = 0usize;
    for (no, line) in lines {
        let no = no + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == "c" || trimmed.starts_with("c ") {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_error(no, "expected \"<i> <j> <coeff>\""));
        }
        let i: u32 = fields[0]
            .parse()
            .map_err(|_| parse_error(no, "bad row index"))?;
        let j: u32 = fields[1]
            .parse()
            .map_err(|_| parse_error(no, "bad column index"))?;
        let coeff: i64 = fields[2]
            .parse()
            .map_err(|_| parse_error(no, "bad coefficient"))?;
        if i as usize >= num_vars || j as usize >= num_vars {
            return Err(parse_error(no, "variable index out of range"));
        }
        if i > j {
            return Err(parse_error(no, "entries must satisfy i <= j"));
        }
        if i == j {
            if qubo.linear_coeff(i) != 0 {
                return Err(parse_error(no, "duplicate diagonal entry"));
            }
            seen_diag += 1;
            qubo.add_linear(i, coeff);
        } else {
            if qubo.quadratic_coeff(i, j) != 0 {
                return Err(parse_error(no, "duplicate off-diagonal entry"));
            }
            seen_offdiag += 1;
            qubo.add_quadratic(i, j, coeff);
        }
    }
    if seen_diag != n_diag {
        return Err(Error::HeaderMismatch {
            what: "diagonal entries",
            declared: n_diag,
            found: seen_diag,
        });
    }
    if seen_offdiag != n_offdiag {
        return Err(Error::HeaderMismatch {
            what: "off-diagonal entries",
            declared: n_offdiag,
            found: seen_offdiag,
        });
    }
    Ok(qubo)
}

/// JSON sidecar describing the instance a QUBO file was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub px: u64,
    pub py: u64,
    pub qx: u64,
    pub qy: u64,
    pub order: u64,
    pub m: u32,
    pub n: u32,
    pub method: u8,
    pub shift: u64,
    pub offset: i64,
    pub variables: Vec<VariableRole>,
    pub format_version: u32,
}

impl InstanceMeta {
    pub fn new(inst: &EcdlpInstance, sys: &EquationSystem, offset: i64) -> Self {
        let (px, py) = inst.base().coords().expect("base is finite");
        let (qx, qy) = inst.target().coords().expect("target is finite");
        InstanceMeta {
            p: inst.curve().modulus(),
            a: inst.curve().a().value(),
            b: inst.curve().b().value(),
            px: px.value(),
            py: py.value(),
            qx: qx.value(),
            qy: qy.value(),
            order: inst.order(),
            m: inst.scalar_bits(),
            n: inst.coordinate_bits(),
            method: sys.method().number(),
            shift: sys.shift(),
            offset,
            variables: sys.varmap().roles().to_vec(),
            format_version: 1,
        }
    }

    /// Reconstructs the classical instance this sidecar describes.
    pub fn instance(&self) -> Result<EcdlpInstance> {
        EcdlpInstance::from_integers(self.p, self.a, self.b, self.px, self.py, self.qx, self.qy)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubo::Assignment;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn three_var_example() -> QuboInstance {
        let mut q = QuboInstance::new(3);
        q.add_linear(0, 3);
        q.add_linear(2, -3);
        q.add_quadratic(1, 2, 5);
        q
    }

    #[test]
    fn export_worked_example() {
        let text = export_qubo_to_string(&three_var_example());
        assert_eq!(text, "p qubo 0 3 2 1\n0 0 3\n2 2 -3\n1 2 5\n");
    }

    #[test]
    fn export_empty_instance() {
        let text = export_qubo_to_string(&QuboInstance::new(0));
        assert_eq!(text, "p qubo 0 0 0 0\n");
    }

    #[test]
    fn import_round_trip() {
        let q = three_var_example();
        let text = export_qubo_to_string(&q);
        let back = import_qubo(text.as_bytes()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn import_accepts_comments() {
        let text = "c generated for a test\nc\np qubo 0 2 1 1\n0 0 -4\n0 1 2\n";
        let q = import_qubo(text.as_bytes()).unwrap();
        assert_eq!(q.num_vars(), 2);
        assert_eq!(q.linear_coeff(0), -4);
        assert_eq!(q.quadratic_coeff(0, 1), 2);
    }

    #[test]
    fn import_reports_line_numbers() {
        let text = "p qubo 0 2 1 0\n0 zero -4\n";
        match import_qubo(text.as_bytes()) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn import_rejects_truncated_body() {
        let text = "p qubo 0 3 2 1\n0 0 3\n";
        assert!(matches!(
            import_qubo(text.as_bytes()),
            Err(Error::HeaderMismatch {
                what: "diagonal entries",
                declared: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn import_rejects_bad_indices() {
        let text = "p qubo 0 2 0 1\n1 0 5\n";
        assert!(matches!(import_qubo(text.as_bytes()), Err(Error::ParseError { line: 2, .. })));
        let text = "p qubo 0 2 0 1\n0 7 5\n";
        assert!(matches!(import_qubo(text.as_bytes()), Err(Error::ParseError { line: 2, .. })));
    }

    #[test]
    fn round_trip_randomized() {
        let mut rng = StdRng::seed_from_u64(0x10);
        for _ in 0..500 {
            let n = rng.gen_range(0..=64usize);
            let mut q = QuboInstance::new(n);
            for i in 0..n as u32 {
                if rng.gen_bool(0.5) {
                    q.add_linear(i, rng.gen_range(-1000..=1000));
                }
                for j in (i + 1)..n as u32 {
                    if rng.gen_bool(0.1) {
                        q.add_quadratic(i, j, rng.gen_range(-1000..=1000));
                    }
                }
            }
            let back = import_qubo(export_qubo_to_string(&q).as_bytes()).unwrap();
            assert_eq!(back, q);
            if n > 0 {
                // Same energies on a few random assignments.
                for _ in 0..5 {
                    let asg = Assignment::new((0..n).map(|_| rng.gen_range(0..=1)).collect());
                    assert_eq!(q.energy(&asg).unwrap(), back.energy(&asg).unwrap());
                }
            }
        }
    }

    #[test]
    fn sidecar_round_trip() {
        use crate::reduce::{compile, Method};
        let inst = EcdlpInstance::from_integers(3, 2, 1, 2, 1, 0, 2).unwrap();
        let compiled = compile(&inst, Method::FirstIdea, 0).unwrap();
        let meta = InstanceMeta::new(&inst, &compiled.system, compiled.qubo.offset());
        let text = meta.to_json().unwrap();
        let back = InstanceMeta::from_json(&text).unwrap();
        assert_eq!(back, meta);
        assert_eq!(back.instance().unwrap(), inst);
        assert_eq!(back.variables.len(), compiled.qubo.num_vars());
        assert_eq!(back.format_version, 1);
        // Role objects use the documented tags.
        assert!(text.contains("\"role\": \"scalar_bit\""));
        assert!(text.contains("\"role\": \"point_bit\""));
        assert!(text.contains("\"role\": \"carry_bit\""));
        assert!(text.contains("\"role\": \"aux_product\""));
        assert!(text.contains("\"coord\": \"x\""));
    }
}
