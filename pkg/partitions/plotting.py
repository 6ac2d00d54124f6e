"""Static SVG drawings of partitions and embeddings (matplotlib, Agg canvas, fixed metadata)."""
import io
import logging

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = 'overlap-lab'
PALETTE = plt.get_cmap('tab20')


def _figure():
    plt.rcParams['svg.hashsalt'] = SVG_HASH_SALT
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.set_aspect('equal')
    ax.axis('off')
    return fig, ax


def _to_svg(fig):
    buffer = io.BytesIO()
    fig.savefig(buffer, format='svg', metadata={'Date': None})
    plt.close(fig)
    return buffer.getvalue()


def _extent(points, apex=None):
    xs = [float(p[0]) for p in points] + ([float(apex[0])] if apex is not None else [])
    ys = [float(p[1]) for p in points] + ([float(apex[1])] if apex is not None else [])
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    return span


def _ray(apex, direction, length):
    x, y = float(apex[0]), float(apex[1])
    dx, dy = float(direction[0]), float(direction[1])
    norm = (dx * dx + dy * dy) ** 0.5 or 1.0
    return x + length * dx / norm, y + length * dy / norm


def sector_partition_svg(partition):
    """Points coloured by sector, the three lines through the apex."""
    fig, ax = _figure()
    apex = partition.apex
    length = 2 * _extent(partition.points, apex)
    for direction in partition.directions:
        x0, y0 = _ray(apex, direction, -length)
        x1, y1 = _ray(apex, direction, length)
        ax.plot([x0, x1], [y0, y1], color='0.4', linewidth=0.8)
    for i, sector in enumerate(partition.sectors):
        pts = [partition.points[j] for j in sector]
        ax.scatter([float(p[0]) for p in pts], [float(p[1]) for p in pts], s=14, color=PALETTE(i % 20),
                   label=f'S{i} ({len(pts)})')
    ax.scatter([float(apex[0])], [float(apex[1])], marker='x', color='black', s=40)
    ax.legend(loc='upper right', fontsize=7)
    return _to_svg(fig)


def cone_partition_svg(partition):
    """Points coloured by cone, boundary rays from the centre."""
    fig, ax = _figure()
    apex = partition.apex
    length = 1.2 * _extent(partition.points, apex)
    for direction in partition.boundaries:
        x1, y1 = _ray(apex, direction, length)
        ax.plot([float(apex[0]), x1], [float(apex[1]), y1], color='0.6', linewidth=0.5)
    for i in range(partition.k):
        pts = partition.block_points(i)
        ax.scatter([float(p[0]) for p in pts], [float(p[1]) for p in pts], s=10, color=PALETTE(i % 20))
    ax.scatter([float(apex[0])], [float(apex[1])], marker='x', color='black', s=40)
    return _to_svg(fig)


def embedding_svg(points, witness=None, edges=(), max_edges=200):
    """Embedded vertices, up to ``max_edges`` hyperedge simplices, and the deep point if given."""
    fig, ax = _figure()
    for edge in list(edges)[:max_edges]:
        loop = [points[v] for v in edge] + [points[edge[0]]]
        ax.plot([float(p[0]) for p in loop], [float(p[1]) for p in loop], color='0.75', linewidth=0.4)
    ax.scatter([float(p[0]) for p in points], [float(p[1]) for p in points], s=14, color=PALETTE(0))
    if witness is not None:
        ax.scatter([float(witness[0])], [float(witness[1])], marker='*', color='crimson', s=80)
    if len(edges) > max_edges:
        logger.info(f"Drawing {max_edges} of {len(edges)} hyperedges")
    return _to_svg(fig)
