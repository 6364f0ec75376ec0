//! Scratch driver for profiling scalar arithmetic on rational functions.

use falg_core::Chart;
use std::time::Instant;

fn main() {
    let chart = Chart::coordinates(&["x", "y"]).unwrap();
    let p1 = chart.parse("3*x^2*y^2 - 2*x*y + 4*x - 1").unwrap();
    let q1 = chart.parse("2*x^2*y - 3*y^2 + x").unwrap();
    let p2 = chart.parse("-4*x^2*y + y^2 - 3").unwrap();
    let q2 = chart.parse("x*y^2 + 2*x^2 - y").unwrap();

    let t0 = Instant::now();
    let a = p1.div(&chart.one().add(&q1.mul(&q1))).unwrap();
    println!("a built: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let b = p2.div(&chart.one().add(&q2.mul(&q2))).unwrap();
    println!("b built: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let s = a.add(&b);
    println!("a+b: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let m = a.mul(&b);
    println!("a*b: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let d = m.mul(&s).add(&a.mul(&b.add(&s)));
    println!("nested: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let dd = d.differentiate("x").unwrap();
    println!("diff: {:?} (terms: {})", t0.elapsed(), dd.render().len());
}
