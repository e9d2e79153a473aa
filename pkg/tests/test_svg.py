from rmplab.svg import emit_svg_scatter


def test_empty_scatter_is_valid():
    doc = emit_svg_scatter([])
    assert doc.startswith('<?xml')
    assert '<svg' in doc and doc.rstrip().endswith('</svg>')
    assert '<circle' not in doc


def test_three_points_three_circles():
    doc = emit_svg_scatter([(0, 0), (1, 1), (2, 2)])
    assert doc.count('<circle') == 3


def test_deterministic_bytes():
    pts = [(0.1 * k, 0.3 * k * k) for k in range(20)]
    assert emit_svg_scatter(pts, title="x") == emit_svg_scatter(pts, title="x")


def test_limits_and_title():
    doc = emit_svg_scatter([(0.5, 0.5)], title="hello", xlim=(-1, 1), ylim=(-2, 2))
    assert "hello" in doc
    assert "-1.100000" in doc  # padded x-limit label
