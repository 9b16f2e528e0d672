//! Shared inputs for the benchmarks.

use plcone::cells::CellType;
use plcone::evolver::{pop, refine, PopSpec};
use plcone::mass::{cone_complex, Complex3, Hull};
use plcone::partition::{build_partition, PartitionLabel};

/// Cone of a partition clipped to its hull.
pub fn cone(l: PartitionLabel) -> Complex3 {
    let p = build_partition(l).expect("partition builds");
    let h = Hull::from_partition(&p).expect("hull");
    cone_complex(&p, &h).expect("cone")
}

/// The popped T₇ cone refined `levels` times.
pub fn t7_popped(levels: u32) -> Complex3 {
    let p = build_partition(PartitionLabel::T7).expect("partition builds");
    let h = Hull::from_partition(&p).expect("hull");
    let cell = p.cells.iter().position(|c| c.cell_type == CellType::C7).expect("prism cell");
    let spec = PopSpec::for_cell(&p, &h, cell).expect("pop centre");
    let mut c = pop(&p, &spec).expect("pop");
    for _ in 0..levels {
        c = refine(&c);
    }
    c
}
