"""Procedural doodle templates for the 23 sketchable categories.

Each category has 10 parameterized variants drawn in a y-down unit-ish box,
mimicking how the shapes appear on the drawing cheat sheet (bold strokes,
exaggerated distinguishing features).  Variants exist so the matcher
tolerates different drawing styles: aspect ratios, hump counts, knob
positions and proportions all vary.

Coordinates here are nominal; the recognizer normalizes before matching, so
only shape and aspect matter.
"""

from __future__ import annotations

import numpy as np

from .categories import CATEGORIES
from .errors import InvalidInputError
from .strokes import Sketch

N_VARIANTS = 10


def _circle(cx, cy, r, n=28):
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = np.stack([cx + r * np.cos(t), cy + r * np.sin(t)], axis=1)
    return np.concatenate([pts, pts[:1]], axis=0)


def _rect(x0, y0, x1, y1):
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])


def _line(x0, y0, x1, y1):
    return np.array([[x0, y0], [x1, y1]])


def _square(v):
    h = (1.0, 0.85, 1.15, 0.92, 1.08, 0.8, 1.22, 0.95, 1.1, 0.88)[v]
    return [_rect(0, 0, 1, h)]


def _jail_window(v):
    bars = (3, 4, 2, 3, 4, 3, 2, 4, 3, 3)[v]
    h = (0.8, 0.75, 0.85, 0.7, 0.8, 0.78, 0.82, 0.72, 0.76, 0.8)[v]
    strokes = [_rect(0, 0, 1, h)]
    for i in range(1, bars + 1):
        x = i / (bars + 1)
        strokes.append(_line(x, 0, x, h))
    return strokes


def _camera(v):
    r = (0.18, 0.2, 0.16, 0.21, 0.19, 0.17, 0.22, 0.18, 0.2, 0.19)[v]
    bump_w = (0.3, 0.26, 0.34, 0.28, 0.32, 0.3, 0.26, 0.34, 0.3, 0.28)[v]
    body_top = 0.28
    strokes = [_rect(0, body_top, 1, 0.92)]
    strokes.append(_circle(0.5, 0.6, r))
    x0 = 0.5 - bump_w / 2
    strokes.append(np.array([[x0, body_top], [x0, 0.1], [x0 + bump_w, 0.1], [x0 + bump_w, body_top]]))
    return strokes


def _cloud(v):
    bumps = (4, 5, 6, 4, 5, 6, 4, 5, 6, 5)[v]
    amp = (0.14, 0.12, 0.1, 0.16, 0.13, 0.11, 0.12, 0.15, 0.1, 0.13)[v]
    base_y = 0.72
    rx, ry = 0.42, 0.4
    theta = np.linspace(np.pi, 0.0, 48)
    mod = 1.0 + amp * np.abs(np.sin(bumps * theta))
    xs = 0.5 + rx * np.cos(theta) * mod
    ys = base_y - ry * np.sin(theta) * mod
    top = np.stack([xs, ys], axis=1)
    bottom = np.array([[xs[-1], base_y], [xs[0], base_y]])
    return [np.concatenate([top, bottom], axis=0)]


def _envelope(v):
    h = (0.6, 0.55, 0.65, 0.58, 0.62, 0.56, 0.68, 0.6, 0.64, 0.57)[v]
    flap = np.array([[0, 0], [0.5, h * 0.55], [1, 0]])
    return [_rect(0, 0, 1, h), flap]


def _house(v):
    apex = (0.0, 0.05, 0.02, 0.0, 0.06, 0.03, 0.0, 0.04, 0.01, 0.05)[v]
    body_w = (0.7, 0.74, 0.66, 0.72, 0.68, 0.7, 0.76, 0.64, 0.7, 0.72)[v]
    eave = 0.4
    x0 = 0.5 - body_w / 2
    roof = np.array([[0.06, eave], [0.5, apex], [0.94, eave]])
    return [roof, _rect(x0, eave, x0 + body_w, 1.0)]


def _star(v):
    inner = (0.21, 0.19, 0.24, 0.2, 0.23, 0.22, 0.19, 0.25, 0.21, 0.22)[v]
    pts = []
    for i in range(10):
        r = 0.5 if i % 2 == 0 else inner
        a = -np.pi / 2 + i * np.pi / 5
        pts.append([0.5 + r * np.cos(a), 0.52 + r * np.sin(a)])
    pts.append(pts[0])
    return [np.array(pts)]


def _avatar(v):
    r = (0.2, 0.18, 0.22, 0.19, 0.21, 0.2, 0.18, 0.22, 0.2, 0.19)[v]
    dip = (0.42, 0.4, 0.44, 0.41, 0.43, 0.42, 0.45, 0.4, 0.43, 0.41)[v]
    head = _circle(0.5, 0.26, r)
    xs = np.linspace(0.06, 0.94, 24)
    ys = 0.98 - dip * np.sin(np.pi * (xs - 0.06) / 0.88)
    return [head, np.stack([xs, ys], axis=1)]


def _back(v):
    open_w = (0.5, 0.45, 0.55, 0.48, 0.52, 0.46, 0.56, 0.5, 0.54, 0.47)[v]
    return [np.array([[0.25 + open_w, 0.05], [0.25, 0.5], [0.25 + open_w, 0.95]])]


def _forward(v):
    open_w = (0.5, 0.45, 0.55, 0.48, 0.52, 0.46, 0.56, 0.5, 0.54, 0.47)[v]
    return [np.array([[0.75 - open_w, 0.05], [0.75, 0.5], [0.75 - open_w, 0.95]])]


def _left_arrow(v):
    head = (0.3, 0.26, 0.34, 0.28, 0.32, 0.3, 0.27, 0.33, 0.29, 0.31)[v]
    spread = (0.32, 0.3, 0.34, 0.29, 0.33, 0.31, 0.35, 0.3, 0.32, 0.31)[v]
    shaft = _line(0.97, 0.5, 0.03, 0.5)
    arrow = np.array([[0.03 + head, 0.5 - spread], [0.03, 0.5], [0.03 + head, 0.5 + spread]])
    return [shaft, arrow]


def _cancel(v):
    e = (0.92, 0.9, 0.94, 0.88, 0.93, 0.91, 0.95, 0.89, 0.92, 0.9)[v]
    return [_line(0.08, 0.08, e, e), _line(e, 0.08, 0.08, e)]


def _checkbox(v):
    h = (1.0, 0.95, 1.05, 0.98, 1.02, 0.96, 1.04, 1.0, 0.97, 1.03)[v]
    check = np.array([[0.2, 0.55 * h], [0.42, 0.78 * h], [0.84, 0.22 * h]])
    return [_rect(0, 0, 1, h), check]


def _drop_down(v):
    h = (0.36, 0.32, 0.4, 0.34, 0.38, 0.33, 0.42, 0.35, 0.39, 0.36)[v]
    chv = np.array([[0.72, h * 0.3], [0.81, h * 0.72], [0.9, h * 0.3]])
    return [_rect(0, 0, 1, h), chv]


def _menu(v):
    shift = (0.0, 0.02, -0.02, 0.01, -0.01, 0.03, -0.03, 0.02, 0.0, -0.02)[v]
    ys = (0.12 + shift, 0.5, 0.88 - shift)
    return [_line(0, y, 1, y) for y in ys]


def _play(v):
    w = (0.84, 0.8, 0.88, 0.82, 0.86, 0.8, 0.9, 0.84, 0.82, 0.86)[v]
    return [np.array([[0.08, 0.05], [0.08, 0.95], [0.08 + w, 0.5], [0.08, 0.05]])]


def _plus(v):
    d = (0.0, 0.02, -0.02, 0.01, -0.01, 0.02, 0.0, -0.02, 0.01, -0.01)[v]
    return [_line(0.5 + d, 0.04, 0.5 + d, 0.96), _line(0.04, 0.5 - d, 0.96, 0.5 - d)]


def _search(v):
    r = (0.32, 0.3, 0.34, 0.31, 0.33, 0.3, 0.35, 0.32, 0.31, 0.33)[v]
    c = 0.38
    start = c + r * np.sqrt(0.5)
    return [_circle(c, c, r), _line(start, start, 0.97, 0.97)]


def _setting(v):
    teeth = (8, 7, 6, 8, 7, 6, 8, 7, 6, 8)[v]
    r = (0.3, 0.32, 0.28, 0.31, 0.29, 0.33, 0.3, 0.31, 0.32, 0.29)[v]
    strokes = [_circle(0.5, 0.5, r)]
    for i in range(teeth):
        a = 2.0 * np.pi * i / teeth
        strokes.append(
            _line(
                0.5 + r * np.cos(a),
                0.5 + r * np.sin(a),
                0.5 + (r + 0.16) * np.cos(a),
                0.5 + (r + 0.16) * np.sin(a),
            )
        )
    return strokes


def _share(v):
    r = (0.11, 0.1, 0.12, 0.1, 0.11, 0.12, 0.1, 0.11, 0.12, 0.11)[v]
    a = np.array([0.14, 0.5])
    b = np.array([0.86, 0.13])
    c = np.array([0.86, 0.87])
    strokes = [_circle(*a, r), _circle(*b, r), _circle(*c, r)]
    for node in (b, c):
        d = node - a
        d = d / np.sqrt(d @ d)
        p0 = a + d * r
        p1 = node - d * r
        strokes.append(np.stack([p0, p1]))
    return strokes


def _slider(v):
    knob_x = (0.3, 0.5, 0.7, 0.35, 0.65, 0.45, 0.55, 0.6, 0.4, 0.5)[v]
    r = (0.08, 0.09, 0.07, 0.1, 0.08, 0.09, 0.07, 0.08, 0.1, 0.09)[v]
    return [_line(0, 0.5, 1, 0.5), _circle(knob_x, 0.5, r, n=16)]


def _squiggle(v):
    humps = (3.0, 4.0, 3.5, 4.5, 3.0, 4.0, 5.0, 3.5, 4.5, 4.0)[v]
    amp = (0.1, 0.11, 0.09, 0.12, 0.1, 0.09, 0.11, 0.12, 0.08, 0.1)[v]
    xs = np.linspace(0.0, 1.0, 44)
    ys = 0.5 + amp * np.sin(2.0 * np.pi * humps * xs)
    return [np.stack([xs, ys], axis=1)]


def _switch(v):
    h = (0.46, 0.5, 0.42, 0.48, 0.52, 0.44, 0.5, 0.46, 0.54, 0.48)[v]
    right = v % 2 == 0
    cap = h / 2
    y0, y1 = 0.5 - cap, 0.5 + cap
    t = np.linspace(-np.pi / 2, np.pi / 2, 12)
    right_cap = np.stack([(1 - cap) + cap * np.cos(t), 0.5 + cap * np.sin(t)], axis=1)
    t2 = np.linspace(np.pi / 2, 3 * np.pi / 2, 12)
    left_cap = np.stack([cap + cap * np.cos(t2), 0.5 + cap * np.sin(t2)], axis=1)
    pill = np.concatenate(
        [np.array([[cap, y0]]), np.array([[1 - cap, y0]]), right_cap, np.array([[1 - cap, y1], [cap, y1]]), left_cap],
        axis=0,
    )
    knob_x = 1 - cap if right else cap
    return [pill, _circle(knob_x, 0.5, cap * 0.62, n=16)]


_BUILDERS = {
    "avatar": _avatar,
    "back": _back,
    "camera": _camera,
    "cancel": _cancel,
    "checkbox": _checkbox,
    "cloud": _cloud,
    "drop_down": _drop_down,
    "envelope": _envelope,
    "forward": _forward,
    "house": _house,
    "jail_window": _jail_window,
    "left_arrow": _left_arrow,
    "menu": _menu,
    "play": _play,
    "plus": _plus,
    "search": _search,
    "setting": _setting,
    "share": _share,
    "slider": _slider,
    "square": _square,
    "squiggle": _squiggle,
    "star": _star,
    "switch": _switch,
}

assert set(_BUILDERS) == set(CATEGORIES)


def category_sketch(category: str, variant: int = 0) -> Sketch:
    """The doodle for one category variant, as a raw stroke sequence."""
    if category not in _BUILDERS:
        raise InvalidInputError(f"unknown category: {category!r}")
    if not 0 <= variant < N_VARIANTS:
        raise InvalidInputError(f"variant must be in [0, {N_VARIANTS}), got {variant}")
    return Sketch(tuple(_BUILDERS[category](variant)))


def all_template_sketches(variants: int = N_VARIANTS) -> list[tuple[str, Sketch]]:
    """(category, sketch) pairs for every category, grouped and ordered by category."""
    if not 1 <= variants <= N_VARIANTS:
        raise InvalidInputError(f"variants must be in [1, {N_VARIANTS}]")
    return [(cat, category_sketch(cat, v)) for cat in CATEGORIES for v in range(variants)]
