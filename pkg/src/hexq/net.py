"""Action-value network with hexagonal convolution filters.

Every conv layer concatenates two filter banks over the same input: wide
filters covering the 19 cells within hex distance 2, and narrow filters
covering the 7 cells within hex distance 1. Both are realized as one
GEMM per layer over a 19-tap gather, with per-filter boolean masks that
keep the narrow filters' out-of-window taps (and all non-hex taps) at
exactly zero through init, backprop, and every optimizer step.

Hidden activations are ReLU. The dense head maps the flattened final
feature volume to N*N action values through o(x) = 1 - 2*sigmoid(x),
computed as -tanh(x/2) with the pre-activation clipped to +-16 so the
outputs stay strictly inside (-1, 1) even in single precision.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

WEIGHT_MAGIC = b"NHX1"
WEIGHT_VERSION = 1
HEAD_CLIP = 16.0
PAD = 2  # per-side zero padding that keeps conv layers shape-preserving


def _hex_distance(dr: int, dc: int) -> int:
    return (abs(dr) + abs(dc) + abs(dr + dc)) // 2


# Tap offsets within hex distance 2, scanned row-major; the 7 distance<=1
# taps of the narrow filters are a fixed subset of these 19.
TAPS5 = tuple(
    (dr, dc)
    for dr in range(-2, 3)
    for dc in range(-2, 3)
    if _hex_distance(dr, dc) <= 2
)
TAPS3_IN5 = tuple(i for i, (dr, dc) in enumerate(TAPS5) if _hex_distance(dr, dc) <= 1)
assert len(TAPS5) == 19 and len(TAPS3_IN5) == 7


def hex_mask(diameter: int) -> np.ndarray:
    """Binary window mask keeping taps within hex distance (diameter-1)/2."""
    if diameter not in (3, 5):
        raise ValueError(f"unsupported filter diameter {diameter}")
    radius = (diameter - 1) // 2
    mask = np.zeros((diameter, diameter), dtype=np.uint8)
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            if _hex_distance(dr, dc) <= radius:
                mask[dr + radius, dc + radius] = 1
    return mask


@dataclass(frozen=True)
class NetConfig:
    board_size: int
    conv_layers: int = 10
    filters_d5: int = 64
    filters_d3: int = 64
    precision: str = "single"
    init_seed: int = 0

    def __post_init__(self):
        if self.conv_layers < 1:
            raise ValueError("need at least one conv layer")
        if self.filters_d5 < 0 or self.filters_d3 < 0 or self.channels < 1:
            raise ValueError("need at least one filter per layer")
        if self.precision not in ("single", "double"):
            raise ValueError(f"precision must be single or double, got {self.precision!r}")

    @property
    def channels(self) -> int:
        return self.filters_d5 + self.filters_d3

    @property
    def spatial(self) -> int:
        return self.board_size + 2 * PAD

    @property
    def dtype(self):
        return np.float32 if self.precision == "single" else np.float64


def _layer_mask(c_in: int, f5: int, f3: int) -> np.ndarray:
    """(19, c_in, f5+f3) bool; wide filters use all 19 taps, narrow only 7."""
    mask = np.zeros((len(TAPS5), c_in, f5 + f3), dtype=bool)
    mask[:, :, :f5] = True
    mask[list(TAPS3_IN5), :, f5:] = True
    return mask


class QNetwork:
    """Mutable parameter set; one instance is owned by a single trainer."""

    def __init__(self, config: NetConfig, conv_w, conv_b, head_w, head_b):
        self.config = config
        self.conv_w = conv_w  # list of (19, c_in, c_out)
        self.conv_b = conv_b  # list of (c_out,)
        self.head_w = head_w  # (spatial^2 * c_out, n^2)
        self.head_b = head_b  # (n^2,)
        self.conv_mask = [
            _layer_mask(w.shape[1], config.filters_d5, config.filters_d3)
            for w in conv_w
        ]

    @property
    def n_actions(self) -> int:
        return self.board_size * self.board_size

    @property
    def board_size(self) -> int:
        return self.config.board_size

    def parameters(self) -> list[np.ndarray]:
        return [*self.conv_w, *self.conv_b, self.head_w, self.head_b]

    def copy(self) -> "QNetwork":
        return QNetwork(
            self.config,
            [w.copy() for w in self.conv_w],
            [b.copy() for b in self.conv_b],
            self.head_w.copy(),
            self.head_b.copy(),
        )


@dataclass
class Gradients:
    conv_w: list
    conv_b: list
    head_w: np.ndarray
    head_b: np.ndarray

    def arrays(self) -> list[np.ndarray]:
        return [*self.conv_w, *self.conv_b, self.head_w, self.head_b]

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.arrays())


def init_network(config: NetConfig) -> QNetwork:
    """He initialization over the active taps; small uniform head."""
    rng = np.random.default_rng(config.init_seed)
    dt = config.dtype
    f5, f3 = config.filters_d5, config.filters_d3
    conv_w, conv_b = [], []
    c_in = 6
    for _ in range(config.conv_layers):
        w = np.zeros((len(TAPS5), c_in, f5 + f3))
        if f5:
            w[:, :, :f5] = rng.normal(0.0, np.sqrt(2.0 / (19 * c_in)), (19, c_in, f5))
        if f3:
            w[list(TAPS3_IN5), :, f5:] = rng.normal(
                0.0, np.sqrt(2.0 / (7 * c_in)), (7, c_in, f3)
            )
        conv_w.append(w.astype(dt))
        conv_b.append(np.zeros(f5 + f3, dtype=dt))
        c_in = f5 + f3
    s = config.spatial
    head_w = rng.uniform(-0.01, 0.01, (s * s * c_in, config.board_size**2)).astype(dt)
    head_b = np.zeros(config.board_size**2, dtype=dt)
    return QNetwork(config, conv_w, conv_b, head_w, head_b)


class Workspace:
    """Reusable scratch buffers for the hot training loop.

    Buffers are recycled across calls, so a cache produced with a workspace
    is only valid until the next forward/backward using the same workspace.
    Pass None (the default) for fully independent, thread-safe calls.
    """

    def __init__(self):
        self._bufs = {}

    def buf(self, key, shape, dtype) -> tuple[np.ndarray, bool]:
        b = self._bufs.get(key)
        if b is None or b.shape != shape or b.dtype != dtype:
            b = np.empty(shape, dtype)
            self._bufs[key] = b
            return b, True
        return b, False


def _fresh_buf(key, shape, dtype) -> tuple[np.ndarray, bool]:
    return np.empty(shape, dtype), True


def _tap_ranges(s: int):
    """Valid output/input slice bounds per tap for zero-padded shifts."""
    out = []
    for dr, dc in TAPS5:
        y0, y1 = max(0, -dr), min(s, s - dr)
        x0, x1 = max(0, -dc), min(s, s - dc)
        out.append((y0, y1, x0, x1, dr, dc))
    return out


def _gather(a: np.ndarray, cols: np.ndarray, s: int, zero_borders: bool) -> np.ndarray:
    """Fill (B, s, s, 19, C) tap columns from (B, s, s, C); zero outside.

    The zero border strips are identical on every call for a given spatial
    size, so a recycled buffer skips re-zeroing them.
    """
    for t, (y0, y1, x0, x1, dr, dc) in enumerate(_tap_ranges(s)):
        if zero_borders:
            if y0:
                cols[:, :y0, :, t, :] = 0.0
            if y1 < s:
                cols[:, y1:, :, t, :] = 0.0
            if x0:
                cols[:, y0:y1, :x0, t, :] = 0.0
            if x1 < s:
                cols[:, y0:y1, x1:, t, :] = 0.0
        cols[:, y0:y1, x0:x1, t, :] = a[:, y0 + dr : y1 + dr, x0 + dc : x1 + dc, :]
    return cols.reshape(-1, cols.shape[3] * cols.shape[4])


@dataclass
class ForwardCache:
    batch: int
    cols: list = field(default_factory=list)  # per-layer gathered tap matrices
    relu_in: list = field(default_factory=list)  # per-layer pre-activations
    head_in: np.ndarray | None = None
    head_pre: np.ndarray | None = None
    out: np.ndarray | None = None


def forward(net: QNetwork, x: np.ndarray, keep_cache: bool = True,
            workspace: Workspace | None = None):
    """Action values for a batch of input tensors.

    x: (B, 6, S, S) or a single (6, S, S); returns ((B, N*N) or (N*N,), cache).
    """
    single = x.ndim == 3
    if single:
        x = x[None]
    s = net.config.spatial
    if x.shape[1:] != (6, s, s):
        raise ValueError(f"expected input (*, 6, {s}, {s}), got {x.shape}")
    buf = workspace.buf if workspace is not None else _fresh_buf
    dt = net.config.dtype
    a = np.ascontiguousarray(np.moveaxis(x, 1, 3), dtype=dt)
    batch = a.shape[0]
    cache = ForwardCache(batch=batch) if keep_cache else None
    for layer, (w, b) in enumerate(zip(net.conv_w, net.conv_b)):
        c_in, c_out = w.shape[1], w.shape[2]
        cols, fresh = buf(("cols", layer, batch), (batch, s, s, len(TAPS5), c_in), dt)
        xm = _gather(a, cols, s, zero_borders=fresh)
        z, _ = buf(("z", layer, batch), (batch * s * s, c_out), dt)
        np.matmul(xm, w.reshape(-1, c_out), out=z)
        z += b
        if cache is not None:
            cache.cols.append(xm)
            cache.relu_in.append(z)
        a, _ = buf(("act", layer, batch), (batch, s, s, c_out), dt)
        np.maximum(z.reshape(a.shape), 0.0, out=a)
    flat = a.reshape(batch, -1)
    pre = flat @ net.head_w
    pre += net.head_b
    np.clip(pre, -HEAD_CLIP, HEAD_CLIP, out=pre)
    out = -np.tanh(0.5 * pre)
    if cache is not None:
        cache.head_in = flat
        cache.head_pre = pre
        cache.out = out
    return (out[0] if single else out), cache


def backward(net: QNetwork, cache: ForwardCache, dout: np.ndarray,
             workspace: Workspace | None = None) -> Gradients:
    """Parameter gradients of any scalar loss with d(loss)/d(outputs) = dout."""
    if cache is None or cache.out is None:
        raise ValueError("backward needs the cache of a matching forward")
    if dout.ndim == 1:
        dout = dout[None]
    buf = workspace.buf if workspace is not None else _fresh_buf
    s = net.config.spatial
    b = cache.batch
    dt = net.config.dtype
    # o = -tanh(pre/2): do/dpre = (o^2 - 1)/2, zero where the clip saturates
    dpre = dout * (cache.out**2 - 1.0) * 0.5
    dpre[np.abs(cache.head_pre) >= HEAD_CLIP] = 0.0
    d_head_w = cache.head_in.T @ dpre
    d_head_b = dpre.sum(axis=0)
    da = (dpre @ net.head_w.T).reshape(b, s, s, -1)
    d_conv_w, d_conv_b = [], []
    for layer in range(len(net.conv_w) - 1, -1, -1):
        w = net.conv_w[layer]
        c_in, c_out = w.shape[1], w.shape[2]
        dz, _ = buf(("dz", layer, b), (b * s * s, c_out), dt)
        np.multiply(da.reshape(-1, c_out), cache.relu_in[layer] > 0.0, out=dz)
        d_conv_b.append(dz.sum(axis=0))
        dw = cache.cols[layer].T @ dz
        dw *= net.conv_mask[layer].reshape(dw.shape)
        d_conv_w.append(dw.reshape(w.shape))
        if layer > 0:
            dcols, _ = buf(("dcols", layer, b), (b * s * s, len(TAPS5) * c_in), dt)
            np.matmul(dz, w.reshape(-1, c_out).T, out=dcols)
            dcv = dcols.reshape(b, s, s, len(TAPS5), c_in)
            da, _ = buf(("da", layer, b), (b, s, s, c_in), dt)
            da.fill(0.0)
            for t, (y0, y1, x0, x1, dr, dc) in enumerate(_tap_ranges(s)):
                da[:, y0 + dr : y1 + dr, x0 + dc : x1 + dc, :] += \
                    dcv[:, y0:y1, x0:x1, t, :]
    return Gradients(d_conv_w[::-1], d_conv_b[::-1], d_head_w, d_head_b)


@dataclass
class OptimizerState:
    alpha: float = 1e-3
    rho: float = 0.9
    eps: float = 1e-8
    acc: list = field(default_factory=list)  # mean-square accumulators

    @classmethod
    def for_net(cls, net: QNetwork, alpha: float = 1e-3, rho: float = 0.9,
                eps: float = 1e-8) -> "OptimizerState":
        return cls(alpha, rho, eps, [np.zeros_like(p) for p in net.parameters()])


def rmsprop_step(net: QNetwork, state: OptimizerState, grads: Gradients) -> None:
    """In-place RMSProp update; skips (and logs) non-finite gradients."""
    if not grads.is_finite():
        log.warning("skipping update: non-finite gradient")
        return
    params = net.parameters()
    garrays = grads.arrays()
    if not state.acc:
        state.acc = [np.zeros_like(p) for p in params]
    for p, g, acc in zip(params, garrays, state.acc):
        acc *= state.rho
        acc += (1.0 - state.rho) * g * g
        p -= state.alpha * g / np.sqrt(acc + state.eps)
    for w, m in zip(net.conv_w, net.conv_mask):
        w *= m


_PRECISION_CODE = {"single": 0, "double": 1}
_HEADER = struct.Struct("<4sIIIIIBq")  # magic, version, n, layers, f5, f3, prec, seed


def save_weights(net: QNetwork, path) -> None:
    cfg = net.config
    with open(path, "wb") as f:
        f.write(_HEADER.pack(
            WEIGHT_MAGIC, WEIGHT_VERSION, cfg.board_size, cfg.conv_layers,
            cfg.filters_d5, cfg.filters_d3, _PRECISION_CODE[cfg.precision],
            cfg.init_seed,
        ))
        for arr in net.parameters():
            f.write(np.ascontiguousarray(arr, dtype=arr.dtype.newbyteorder("<")).tobytes())


def load_weights(path, expected_board_size: int | None = None) -> QNetwork:
    with open(path, "rb") as f:
        blob = f.read()
    if len(blob) < _HEADER.size or blob[:4] != WEIGHT_MAGIC:
        raise ValueError("not a weight file (bad magic)")
    magic, version, n, layers, f5, f3, prec, seed = _HEADER.unpack_from(blob)
    if version != WEIGHT_VERSION:
        raise ValueError(f"unsupported weight format version {version}")
    if prec not in (0, 1):
        raise ValueError("corrupt header: unknown precision code")
    cfg = NetConfig(
        board_size=n, conv_layers=layers, filters_d5=f5, filters_d3=f3,
        precision="single" if prec == 0 else "double", init_seed=seed,
    )
    if expected_board_size is not None and n != expected_board_size:
        raise ValueError(f"weights are for board size {n}, expected {expected_board_size}")
    dt = np.dtype(cfg.dtype).newbyteorder("<")
    offset = _HEADER.size
    ref = init_network(cfg)  # shape template
    arrays = []
    for tmpl in ref.parameters():
        nbytes = tmpl.size * dt.itemsize
        if offset + nbytes > len(blob):
            raise ValueError("truncated weight file")
        arrays.append(
            np.frombuffer(blob, dtype=dt, count=tmpl.size, offset=offset)
            .astype(cfg.dtype)
            .reshape(tmpl.shape)
        )
        offset += nbytes
    if offset != len(blob):
        raise ValueError("trailing bytes in weight file")
    k = cfg.conv_layers
    net = QNetwork(cfg, arrays[:k], arrays[k:2 * k], arrays[2 * k], arrays[2 * k + 1])
    for w, m in zip(net.conv_w, net.conv_mask):
        w *= m
    return net
