pub mod gleamm;
pub mod networks;
pub mod nodal;
