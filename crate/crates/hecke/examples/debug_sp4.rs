use hecke::bases::{Engine, MINUS, PLUS};
use hecke::kspace::EMode;
use hecke::rootsys::{rat_vec, vec_display};

fn main() {
    let eng = Engine::new("C2", EMode::Lusztig).unwrap();
    let ctx = eng.full_context(rat_vec(&[1, 1]));
    let params = hecke::orbits::parameter_set(&ctx, &eng.cb, 0, 5).unwrap();
    for p in &params {
        println!(
            "param {} s=({}) dim={} levi={:?} u+={:?} u-={:?}",
            p.label,
            vec_display(&p.s),
            p.dim,
            p.levi_roots.iter().map(|&a| vec_display(&ctx.rs.roots[a])).collect::<Vec<_>>(),
            p.u_plus_roots.len(),
            p.u_minus_roots.len()
        );
    }
    // build sub-families for the non-open params and print induced blocks
    for o in params.iter().take(params.len() - 1) {
        let subctx = eng.context(o.levi_roots.clone(), o.s.clone());
        println!("--- sub for {}: dim K = {}, degenerate={}", o.label, subctx.dim(), subctx.is_degenerate());
        let subfam = eng.family(&subctx).unwrap();
        for (i, v) in subfam.z[MINUS].iter().enumerate() {
            println!("  sub z-[{}] = {}", i, hecke::bases::kvector_display(&subctx, v));
        }
        println!("  open_start={}", subfam.open_start);
        for vec in subfam.open_block(MINUS) {
            let ind = ctx.induce(&subctx, &o.u_minus_roots, vec).unwrap();
            println!("  induce- -> {}", hecke::bases::kvector_display(&ctx, &ind));
        }
        for vec in subfam.open_block(PLUS) {
            let ind = ctx.induce(&subctx, &o.u_plus_roots, vec).unwrap();
            println!("  induce+ -> {}", hecke::bases::kvector_display(&ctx, &ind));
        }
    }
}
