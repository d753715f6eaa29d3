//! Gmsh MSH 2.2 ASCII reader and writer.
//!
//! Supported element types: 4 (tet), 1 (line), 2 (triangle), 15 (point). Tets take
//! their region tag from the physical tag. Points and triangles in a physical group
//! become a named vertex set; lines in a physical group are stitched into an ordered
//! chain. Groups without a `$PhysicalNames` entry are named by their tag number.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use nalgebra::Vector3;

use super::TetMesh;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MshFile {
    /// Mesh with the point/triangle groups attached as vertex sets.
    pub mesh: TetMesh,
    /// Line groups stitched into vertex chains.
    pub chains: BTreeMap<String, Vec<usize>>,
    /// Names of volume physical groups.
    pub region_names: BTreeMap<String, i32>,
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<&'a str> {
        for (i, l) in self.iter.by_ref() {
            let l = l.trim();
            if !l.is_empty() {
                self.line = i + 1;
                return Some(l);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        let line = self.line;
        self.next().ok_or_else(|| Error::MeshFormat {
            line,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::MeshFormat {
            line: self.line,
            message: message.into(),
        }
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let l = self.expect(what)?;
        l.parse().map_err(|_| self.err(format!("bad {what} {l:?}")))
    }

    fn end(&mut self, section: &str) -> Result<()> {
        let l = self.expect(section)?;
        if l != section {
            return Err(self.err(format!("expected {section}, found {l:?}")));
        }
        Ok(())
    }
}

fn nodes_per_element(code: u32) -> Result<usize> {
    match code {
        15 => Ok(1),
        1 => Ok(2),
        2 => Ok(3),
        4 => Ok(4),
        _ => Err(Error::UnsupportedElement(code)),
    }
}

struct Element {
    code: u32,
    physical: i32,
    nodes: Vec<usize>,
}

pub fn load_msh(text: &str) -> Result<MshFile> {
    let mut lines = Lines {
        iter: text.lines().enumerate(),
        line: 0,
    };
    let mut names: HashMap<(u32, i32), String> = HashMap::new();
    let mut nodes: Vec<(usize, Vector3<f64>)> = Vec::new();
    let mut elements: Vec<Element> = Vec::new();
    let mut saw_format = false;

    while let Some(header) = lines.next() {
        match header {
            "$MeshFormat" => {
                let l = lines.expect("format line")?;
                let f: Vec<&str> = l.split_whitespace().collect();
                if f.len() < 3 || !f[0].starts_with("2.") {
                    return Err(lines.err(format!("unsupported MSH version {l:?}, need 2.2")));
                }
                if f[1] != "0" {
                    return Err(lines.err("binary MSH files are not supported"));
                }
                lines.end("$EndMeshFormat")?;
                saw_format = true;
            }
            "$PhysicalNames" => {
                for _ in 0..lines.count("physical name count")? {
                    let l = lines.expect("physical name")?;
                    let mut f = l.splitn(3, char::is_whitespace);
                    let dim = f.next().and_then(|s| s.parse().ok());
                    let tag = f.next().and_then(|s| s.parse().ok());
                    let name = f.next().map(|s| s.trim().trim_matches('"').to_string());
                    match (dim, tag, name) {
                        (Some(d), Some(t), Some(n)) => {
                            names.insert((d, t), n);
                        }
                        _ => return Err(lines.err(format!("bad physical name {l:?}"))),
                    }
                }
                lines.end("$EndPhysicalNames")?;
            }
            "$Nodes" => {
                let n = lines.count("node count")?;
                nodes.reserve(n);
                for _ in 0..n {
                    let l = lines.expect("node")?;
                    let f: Vec<&str> = l.split_whitespace().collect();
                    let parsed = (f.len() == 4)
                        .then(|| {
                            let id = f[0].parse::<usize>().ok()?;
                            let x: Vec<f64> = f[1..].iter().map(|s| s.parse().ok()).collect::<Option<_>>()?;
                            Some((id, Vector3::new(x[0], x[1], x[2])))
                        })
                        .flatten();
                    nodes.push(parsed.ok_or_else(|| lines.err(format!("bad node {l:?}")))?);
                }
                lines.end("$EndNodes")?;
            }
            "$Elements" => {
                let n = lines.count("element count")?;
                elements.reserve(n);
                for _ in 0..n {
                    let l = lines.expect("element")?;
                    let f: Vec<i64> = l
                        .split_whitespace()
                        .map(|s| s.parse().map_err(|_| lines.err(format!("bad element {l:?}"))))
                        .collect::<Result<_>>()?;
                    if f.len() < 3 {
                        return Err(lines.err(format!("bad element {l:?}")));
                    }
                    let code = u32::try_from(f[1]).map_err(|_| lines.err("bad element type"))?;
                    let n_nodes = nodes_per_element(code)?;
                    let ntags = usize::try_from(f[2]).map_err(|_| lines.err("bad tag count"))?;
                    if f.len() != 3 + ntags + n_nodes {
                        return Err(lines.err(format!(
                            "element type {code} needs {n_nodes} nodes after {ntags} tags"
                        )));
                    }
                    let physical = if ntags > 0 { f[3] as i32 } else { 0 };
                    let nodes = f[3 + ntags..]
                        .iter()
                        .map(|&x| usize::try_from(x).map_err(|_| lines.err("bad node id")))
                        .collect::<Result<_>>()?;
                    elements.push(Element { code, physical, nodes });
                }
                lines.end("$EndElements")?;
            }
            other if other.starts_with('$') => {
                let end = format!("$End{}", &other[1..]);
                while lines.expect(&end)? != end {}
            }
            other => return Err(lines.err(format!("unexpected content {other:?}"))),
        }
    }
    if !saw_format {
        return Err(Error::MeshFormat {
            line: 0,
            message: "missing $MeshFormat".into(),
        });
    }

    // keep only nodes used by tets, in file order
    let mut used = HashMap::new();
    for e in elements.iter().filter(|e| e.code == 4) {
        for &n in &e.nodes {
            used.insert(n, usize::MAX);
        }
    }
    let mut vertices = Vec::with_capacity(used.len());
    for (id, x) in &nodes {
        if let Some(slot) = used.get_mut(id) {
            if *slot != usize::MAX {
                return Err(Error::MeshFormat {
                    line: 0,
                    message: format!("node {id} defined twice"),
                });
            }
            *slot = vertices.len();
            vertices.push(*x);
        }
    }
    let index = |id: usize| -> Result<usize> {
        match used.get(&id) {
            Some(&i) if i != usize::MAX => Ok(i),
            Some(_) => Err(Error::MeshFormat {
                line: 0,
                message: format!("node {id} is referenced but not defined"),
            }),
            None => Err(Error::MeshFormat {
                line: 0,
                message: format!("node {id} is not attached to any tetrahedron"),
            }),
        }
    };

    let mut tets = Vec::new();
    let mut regions = Vec::new();
    let mut sets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut segments: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    let group_name = |dim: u32, tag: i32| names.get(&(dim, tag)).cloned().unwrap_or_else(|| tag.to_string());
    for e in &elements {
        let ids: Vec<usize> = e.nodes.iter().map(|&n| index(n)).collect::<Result<_>>()?;
        match e.code {
            4 => {
                tets.push([ids[0], ids[1], ids[2], ids[3]]);
                regions.push(e.physical);
            }
            1 if e.physical != 0 => segments
                .entry(group_name(1, e.physical))
                .or_default()
                .push((ids[0], ids[1])),
            15 | 2 if e.physical != 0 => {
                let dim = if e.code == 15 { 0 } else { 2 };
                sets.entry(group_name(dim, e.physical)).or_default().extend(ids);
            }
            _ => {}
        }
    }

    let mut mesh = TetMesh::new(vertices, tets, regions)?;
    for (name, vs) in sets {
        mesh = mesh.with_vertex_set(name, vs)?;
    }
    let chains = segments
        .into_iter()
        .map(|(name, segs)| stitch_chain(&name, &segs).map(|c| (name, c)))
        .collect::<Result<_>>()?;
    let region_names = names
        .iter()
        .filter(|((dim, _), _)| *dim == 3)
        .map(|((_, tag), name)| (name.clone(), *tag))
        .collect();
    Ok(MshFile {
        mesh,
        chains,
        region_names,
    })
}

/// Orders line segments into a single open chain. Starts at the end that is the
/// first node of its segment, so consistently oriented input keeps its direction.
fn stitch_chain(group: &str, segments: &[(usize, usize)]) -> Result<Vec<usize>> {
    let fail = |reason: String| Error::ChainStitching {
        group: group.to_string(),
        reason,
    };
    let mut adjacent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in segments {
        if a == b {
            return Err(fail(format!("segment with coincident ends at vertex {a}")));
        }
        adjacent.entry(a).or_default().push(b);
        adjacent.entry(b).or_default().push(a);
    }
    for (v, n) in &adjacent {
        let mut m = n.clone();
        m.sort_unstable();
        if m.windows(2).any(|w| w[0] == w[1]) {
            return Err(fail(format!("repeated segment at vertex {v}")));
        }
        if n.len() > 2 {
            return Err(fail(format!("branches at vertex {v}")));
        }
    }
    let ends: Vec<usize> = adjacent
        .iter()
        .filter(|(_, n)| n.len() == 1)
        .map(|(&v, _)| v)
        .collect();
    if ends.is_empty() {
        return Err(fail("segments form a closed loop".into()));
    }
    let start = ends
        .iter()
        .copied()
        .find(|e| segments.iter().any(|s| s.0 == *e))
        .unwrap_or(ends[0]);
    let mut chain = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adjacent[&cur].iter().find(|&&n| n != prev) {
        chain.push(next);
        prev = cur;
        cur = next;
    }
    if chain.len() != adjacent.len() {
        return Err(fail(format!(
            "segments are disconnected ({} of {} vertices reachable)",
            chain.len(),
            adjacent.len()
        )));
    }
    Ok(chain)
}

/// Serializes a mesh with its vertex sets (as point elements) and chains (as line
/// elements). Reading the result back with [`load_msh`] reproduces the mesh.
pub fn write_msh(mesh: &TetMesh, chains: &BTreeMap<String, Vec<usize>>) -> String {
    let sets: Vec<(&String, &Vec<usize>)> = mesh.vertex_sets().iter().filter(|(_, v)| !v.is_empty()).collect();
    let chains: Vec<(&String, &Vec<usize>)> = chains.iter().filter(|(_, c)| c.len() >= 2).collect();

    let mut out = String::new();
    out.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    if sets.len() + chains.len() > 0 {
        let _ = writeln!(out, "$PhysicalNames\n{}", sets.len() + chains.len());
        for (k, (name, _)) in sets.iter().enumerate() {
            let _ = writeln!(out, "0 {} \"{}\"", k + 1, name);
        }
        for (k, (name, _)) in chains.iter().enumerate() {
            let _ = writeln!(out, "1 {} \"{}\"", k + 1, name);
        }
        out.push_str("$EndPhysicalNames\n");
    }

    let _ = writeln!(out, "$Nodes\n{}", mesh.n_vertices());
    for (i, p) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(out, "{} {} {} {}", i + 1, p.x, p.y, p.z);
    }
    out.push_str("$EndNodes\n");

    let n_points: usize = sets.iter().map(|(_, v)| v.len()).sum();
    let n_lines: usize = chains.iter().map(|(_, c)| c.len() - 1).sum();
    let _ = writeln!(out, "$Elements\n{}", n_points + n_lines + mesh.n_tets());
    let mut id = 0;
    for (k, (_, vs)) in sets.iter().enumerate() {
        for v in vs.iter() {
            id += 1;
            let _ = writeln!(out, "{id} 15 2 {} {} {}", k + 1, k + 1, v + 1);
        }
    }
    for (k, (_, c)) in chains.iter().enumerate() {
        for w in c.windows(2) {
            id += 1;
            let _ = writeln!(out, "{id} 1 2 {} {} {} {}", k + 1, k + 1, w[0] + 1, w[1] + 1);
        }
    }
    for (t, tet) in mesh.tets().iter().enumerate() {
        id += 1;
        let r = mesh.regions()[t];
        let _ = writeln!(
            out,
            "{id} 4 2 {r} {r} {} {} {} {}",
            tet[0] + 1,
            tet[1] + 1,
            tet[2] + 1,
            tet[3] + 1
        );
    }
    out.push_str("$EndElements\n");
    out
}
