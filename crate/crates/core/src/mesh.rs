//! Triangle meshes with shared vertices, written as Wavefront OBJ.

use std::collections::HashMap;
use std::io::Write;

use crate::error::Result;

#[derive(Debug, Clone, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// zero-based vertex indices
    pub faces: Vec<[usize; 3]>,
}

impl Mesh {
    /// Triangulates an nx×ny grid; cells touching a missing vertex are dropped
    /// and vertices no cell uses are not emitted.
    pub fn grid(nx: usize, ny: usize, f: impl Fn(usize, usize) -> Option<[f64; 3]>) -> Mesh {
        let pts: Vec<Option<[f64; 3]>> = (0..ny).flat_map(|j| (0..nx).map(move |i| (i, j))).map(|(i, j)| f(i, j)).collect();
        let ok = |i: usize, j: usize| pts[j * nx + i].is_some_and(|p| p.iter().all(|c| c.is_finite()));
        let mut index = vec![usize::MAX; nx * ny];
        let mut mesh = Mesh::default();
        let mut id = |mesh: &mut Mesh, k: usize| {
            if index[k] == usize::MAX {
                index[k] = mesh.vertices.len();
                mesh.vertices.push(pts[k].unwrap());
            }
            index[k]
        };
        for j in 0..ny.saturating_sub(1) {
            for i in 0..nx.saturating_sub(1) {
                if !(ok(i, j) && ok(i + 1, j) && ok(i, j + 1) && ok(i + 1, j + 1)) {
                    continue;
                }
                let a = id(&mut mesh, j * nx + i);
                let b = id(&mut mesh, j * nx + i + 1);
                let c = id(&mut mesh, (j + 1) * nx + i + 1);
                let d = id(&mut mesh, (j + 1) * nx + i);
                mesh.faces.push([a, b, c]);
                mesh.faces.push([a, c, d]);
            }
        }
        mesh
    }

    /// Merges vertices with bit-identical coordinates, e.g. along a periodic
    /// seam, and drops faces that collapse.
    pub fn dedup_vertices(self) -> Mesh {
        let mut seen: HashMap<[u64; 3], usize> = HashMap::new();
        let mut remap = Vec::with_capacity(self.vertices.len());
        let mut vertices = Vec::new();
        for v in &self.vertices {
            let key = v.map(f64::to_bits);
            let k = *seen.entry(key).or_insert_with(|| {
                vertices.push(*v);
                vertices.len() - 1
            });
            remap.push(k);
        }
        let faces = self
            .faces
            .iter()
            .map(|f| f.map(|k| remap[k]))
            .filter(|f| f[0] != f[1] && f[1] != f[2] && f[0] != f[2])
            .collect();
        Mesh { vertices, faces }
    }

    pub fn write_obj(&self, mut out: impl Write) -> Result<()> {
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
        for f in &self.faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }
}
