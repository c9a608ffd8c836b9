use hecke::bases::{kvector_display, multiplicity_matrix, Engine, MINUS};
use hecke::kspace::EMode;
use hecke::rootsys::{rat_vec, vec_display, Rat};
use std::time::Instant;

fn show(label: &str, chi: Vec<Rat>) {
    let t0 = Instant::now();
    let eng = Engine::new(label, EMode::Lusztig).unwrap();
    let (ctx, fam, mult) = eng.analyze(chi.clone()).unwrap();
    println!("== {} chi=({}) dim K={} irr={} params={} [{:?}]",
        label, vec_display(&chi), ctx.dim(), fam.irr, fam.params.len(), t0.elapsed());
    for p in &fam.params {
        println!("  {} s=({}) dim={} sat={:?} comp={:?}", p.label, vec_display(&p.s), p.dim, p.saturation, p.component);
    }
    for (i, v) in fam.z[MINUS].iter().enumerate() {
        println!("  Z-[{}] {} = {}", i, fam.elems[i].label, kvector_display(&ctx, v));
    }
    for (i, v) in fam.u[MINUS].iter().enumerate() {
        println!("  U-[{}] {} = {}", i, fam.elems[i].label, kvector_display(&ctx, v));
    }
    println!("  N:");
    for row in &mult.n {
        println!("    {}", row.iter().map(|x| x.display("v")).collect::<Vec<_>>().join("  "));
    }
    println!("  P:");
    for row in &mult.p {
        println!("    {}", row.iter().map(|x| x.display("q")).collect::<Vec<_>>().join("  "));
    }
    println!("  IM: {:?}", fam.im_label_pairs());
    let _ = multiplicity_matrix(&fam).unwrap();
}

fn main() {
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "gl4" => show("A3", rat_vec(&[2, 0, 0, -2])),
        "sp6" => show("C3", rat_vec(&[3, 1, 1])),
        "g2" => {
            let eng = Engine::new("G2", EMode::Lusztig).unwrap();
            let chi = eng.resolve_chi("G2(a1)").unwrap();
            show("G2", chi);
        }
        "f4" => {
            let t0 = Instant::now();
            let eng = Engine::new("F4", EMode::Lusztig).unwrap();
            let chi = eng.resolve_chi("3,1,1,1").unwrap();
            let (ctx, fam, mult) = eng.analyze(chi).unwrap();
            println!("F4 (3,1,1,1): dim K={} irr={} params={} elems={} [{:?}]",
                ctx.dim(), fam.irr, fam.params.len(), fam.len(), t0.elapsed());
            for p in &fam.params {
                println!("  {} s=({}) dim={} sat={:?} comp={:?}", p.label, vec_display(&p.s), p.dim, p.saturation, p.component);
            }
            println!("  IM: {:?}", fam.im_label_pairs());
            println!("  P row 0: {}", mult.p[0].iter().map(|x| x.display("q")).collect::<Vec<_>>().join(" | "));
        }
        _ => println!("usage: smoke gl4|sp6|g2|f4"),
    }
}
