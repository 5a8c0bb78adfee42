"""Scale-driven font adjustment and per-level visibility.

Map scales are representative fractions (1:20,921,196 is stored as
1/20921196), so zooming in raises the scale value and fonts grow by
S_tar / S_ori.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import PT_TO_SCREEN_M

DEFAULT_SCREEN = (1920, 1080, 96)
DEFAULT_LEVEL_RATIOS = (1.0, 0.5, 0.25)


@dataclass(frozen=True)
class ScaleContext:
    s_ori: float
    s_tar: float
    screen: tuple[int, int, int] = DEFAULT_SCREEN  # width px, height px, dpi

    def __post_init__(self) -> None:
        if self.s_ori <= 0 or self.s_tar <= 0:
            raise ValueError("scales must be positive representative fractions")

    @property
    def ratio(self) -> float:
        return self.s_tar / self.s_ori


@dataclass
class LevelEntry:
    text: str
    font_pt: float      # rescaled size at this level
    visible: bool


@dataclass
class LevelView:
    ratio: float
    scale: float
    entries: list[LevelEntry] = field(default_factory=list)
    empty: bool = False  # largest tag fell below F_min; nothing to lay out

    @property
    def visible_count(self) -> int:
        return sum(1 for e in self.entries if e.visible)


def rescale(font_pt: float, ctx: ScaleContext) -> float:
    """Font size at the target scale: F' = F * S_tar / S_ori."""
    if font_pt <= 0:
        raise ValueError(f"font size must be positive, got {font_pt}")
    return font_pt * ctx.ratio


def level_views(bundle, ratios: list[float]) -> list[LevelView]:
    """One view per zoom ratio: every placed tag rescaled, hidden below F_min.

    A view whose largest tag lands below F_min is empty and flagged.
    """
    views = []
    s_ori = bundle.config.scale
    f_min = bundle.config.f_min
    for ratio in ratios:
        if ratio <= 0:
            raise ValueError(f"zoom ratio must be positive, got {ratio}")
        ctx = ScaleContext(s_ori=s_ori, s_tar=s_ori * ratio)
        view = LevelView(ratio=ratio, scale=s_ori * ratio)
        fonts = [rescale(t.font_pt, ctx) for t in bundle.placed]
        if fonts and max(fonts) < f_min:
            view.empty = True
            views.append(view)
            continue
        for tag, f in zip(bundle.placed, fonts):
            view.entries.append(LevelEntry(tag.spec.text, f, f >= f_min))
        views.append(view)
    return views


def needs_reconstruction(bundle, ctx: ScaleContext) -> bool:
    """Zooming in with unplaced tags warrants a fresh layout at the new scale.

    When every tag made it into the layout, rescaling alone is exact at any
    zoom, in or out.
    """
    return ctx.s_tar > ctx.s_ori and len(bundle.unplaced) > 0


def initial_scale(bbox: tuple[float, float, float, float],
                  screen: tuple[int, int, int] = DEFAULT_SCREEN) -> float:
    """Representative fraction at which the bbox fills the screen.

    pixel size / (ground meters per pixel needed to fit the bbox).
    """
    width_px, height_px, dpi = screen
    if width_px <= 0 or height_px <= 0 or dpi <= 0:
        raise ValueError("screen dimensions and dpi must be positive")
    x0, y0, x1, y1 = bbox
    bw, bh = x1 - x0, y1 - y0
    if bw <= 0 or bh <= 0:
        raise ValueError("degenerate region bounding box")
    pixel_m = 0.0254 / dpi
    ground_per_px = max(bw / width_px, bh / height_px)
    return pixel_m / ground_per_px


def ground_units_per_pt(scale: float) -> float:
    """Ground meters spanned by one point at the given scale."""
    return PT_TO_SCREEN_M / scale
