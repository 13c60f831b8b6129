"""
Versioned JSON mesh files.

Coordinates are written with 17 significant digits so a load reproduces
every double exactly. Writes go to a temporary file in the target
directory and are moved into place with os.replace.
"""
import json
import logging
from pathlib import Path

import numpy as np

from . import config
from .errors import GeotriError, MeshFileError
from .mesh import ETYPE_CODE, ETYPES, EdgeType, Geometry, Mesh, assemble_mesh, canonical_faces
from .utils.atomic_io import atomic_write

logger = logging.getLogger(__name__)


def _num(x: float) -> str:
    return f"{x:.{config.COORD_DIGITS}g}"


def dumps_mesh(m: Mesh) -> str:
    header = {'format_version': config.FORMAT_VERSION, 'model': m.geometry.value, 'params': m.params}
    lines = ['{', f'  "header": {json.dumps(header, sort_keys=True)},', '  "vertices": [']

    rows = []
    for i in range(m.num_vertices):
        coords = ', '.join(_num(c) for c in m.positions[i])
        sector = 'null' if m.sectors[i] < 0 else str(int(m.sectors[i]))
        rows.append(f'    {{"id": {i}, "coords": [{coords}], "layer": {int(m.layers[i])}, '
                    f'"index": {int(m.indices[i])}, "sector": {sector}}}')
    lines.append(',\n'.join(rows))
    lines.append('  ],')

    lines.append('  "edges": [')
    lines.append(',\n'.join(f'    {{"u": {int(u)}, "v": {int(v)}, "etype": "{ETYPES[c].value}"}}'
                            for (u, v), c in zip(m.edges, m.etypes)))
    lines.append('  ],')

    lines.append('  "faces": [')
    lines.append(',\n'.join(f'    [{int(a)}, {int(b)}, {int(c)}]' for a, b, c in m.faces))
    lines.append('  ]')
    lines.append('}')
    return '\n'.join(line for line in lines if line) + '\n'


def save_mesh(m: Mesh, path) -> Path:
    path = atomic_write(path, dumps_mesh(m))
    logger.info("[MeshFile] wrote %s (V=%d E=%d F=%d)", path, m.num_vertices, m.num_edges, m.num_faces)
    return path


def loads_mesh(text: str, strict: bool = False) -> Mesh:
    """
    Parse a mesh document. Stored faces are re-derived for geometric meshes;
    a disagreement is logged, or raised as MeshFileError when strict.
    """
    try:
        doc = json.loads(text)
        header = doc['header']
        if header.get('format_version') != config.FORMAT_VERSION:
            raise MeshFileError(f"unsupported format_version {header.get('format_version')!r}")
        geometry = Geometry(header['model'])
        vertices = doc['vertices']
        if [v['id'] for v in vertices] != list(range(len(vertices))):
            raise MeshFileError("vertex ids must be dense 0..V-1 in file order")
        dim = geometry.dim
        positions = np.array([[float(c) for c in v['coords']] for v in vertices], dtype=float)
        positions = positions.reshape(len(vertices), dim)
        layers = [int(v['layer']) for v in vertices]
        indices = [int(v['index']) for v in vertices]
        sectors = [-1 if v.get('sector') is None else int(v['sector']) for v in vertices]
        edges = np.array([(int(e['u']), int(e['v'])) for e in doc['edges']], dtype=np.int64).reshape(-1, 2)
        etypes = [ETYPE_CODE[EdgeType(e.get('etype', 'Generic'))] for e in doc['edges']]
        faces = np.array(doc.get('faces', []), dtype=np.int64).reshape(-1, 3)
    except MeshFileError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MeshFileError(f"malformed mesh file: {exc}") from exc

    keep_faces = geometry is Geometry.COMBINATORIAL or strict
    try:
        mesh = assemble_mesh(geometry, positions, edges, etypes, layers=layers, indices=indices,
                             sectors=sectors, faces=faces if keep_faces else None,
                             params=header.get('params') or {})
    except GeotriError as exc:
        raise MeshFileError(f"invalid mesh content: {exc}") from exc
    if not keep_faces and len(faces) and not np.array_equal(canonical_faces(faces), mesh.faces):
        logger.warning("[MeshFile] stored faces (%d) differ from derived faces (%d); using derived",
                       len(faces), mesh.num_faces)
    return mesh


def load_mesh(path, strict: bool = False) -> Mesh:
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise MeshFileError(f"cannot read {path}: {exc}") from exc
    return loads_mesh(text, strict=strict)
