//! Builds a distance-3 network of D = 5 modules and prints its makeup.

use hiersurf::topology::{build_layout, Distance, ModuleRole, ModuleSpec};

fn main() -> hiersurf::Result<()> {
    let spec = ModuleSpec::hierarchical(5, 2)?;
    let layout = build_layout(spec, Distance::new(3)?)?;
    println!("module size (clients + broker qubits): {}", spec.size());
    println!("client qubits: {}", layout.len());
    for role in [ModuleRole::Q, ModuleRole::X, ModuleRole::Z] {
        println!("{role:?} modules: {}", layout.module_count(role));
    }
    let edges = layout.lattice_edges();
    let distributed = layout.distributed_edges();
    println!("lattice edges: {}, distributed: {}", edges.len(), distributed.len());

    let m = layout.modules().next().expect("non-empty layout");
    let perimeter = layout.perimeter_classification(m)?;
    let on_perimeter = perimeter.iter().filter(|(_, p)| p.is_perimeter()).count();
    println!("module {m:?}: {on_perimeter} of {} clients on the perimeter", perimeter.len());
    Ok(())
}
