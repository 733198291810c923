use ecdlp_qubo::*;

fn main() {
    for (p, a, b, px, py) in [(3u64, 2u64, 1u64, 2u64, 1u64), (5, 2, 1, 0, 1), (7, 0, 5, 3, 2), (11, 1, 1, 0, 1)] {
        let curve = CurveParams::from_integers(p, a, b).unwrap();
        let base = AffinePoint::finite(FieldElement::new(px, p), FieldElement::new(py, p));
        for y in 1..=6u64 {
            let target = curve.scalar_mul(y, &base).unwrap();
            let inst = EcdlpInstance::new(curve, base, target).unwrap();
            let n1 = compile(&inst, Method::FirstIdea, 0).map(|c| c.qubo.num_vars()).unwrap_or(0);
            let n2 = compile(&inst, Method::SecondIdea, 1).map(|c| c.qubo.num_vars()).unwrap_or(0);
            println!("p={:2} y={} method1={:3} method2={:3} {}", p, y, n1, n2, if n2 > n1 { "ok" } else { "VIOLATION" });
        }
    }
}
