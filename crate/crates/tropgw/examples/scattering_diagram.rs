//! Build a descendent scattering diagram, check consistency around every
//! unmarked singular point, then delete a child wall and watch a loop fail.

use tropgw::geometry::{generate_arrangement, SampleBox};
use tropgw::scattering::{build_diagram, check_all_loops, describe};

fn main() -> tropgw::Result<()> {
    let a = generate_arrangement(7, 2, &SampleBox::default())?;
    let d = build_diagram(&a, 2)?;
    print!("{}", describe(&d));

    let loops = check_all_loops(&d)?;
    let trivial = loops.iter().filter(|(_, ok)| *ok).count();
    println!("{trivial} of {} loops act trivially", loops.len());

    if let Some(idx) = d.walls.iter().position(|w| w.parents.is_some()) {
        let broken = d.without_wall(idx);
        let failing = check_all_loops(&broken)?.iter().filter(|(_, ok)| !ok).count();
        println!("without wall {idx}: {failing} loops fail");
    }
    Ok(())
}
