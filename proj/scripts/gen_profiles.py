#!/usr/bin/env python3
"""Generate the committed model profile fixtures under data/profiles/.

Activation sizes are the output tensor sizes of each feature module for a
1x3x224x224 float32 input. Compute weights start from per-module multiply-
accumulate counts; the feature modules that the static split places on the
edge are then rescaled as a group so their share equals the edge share
observed for that model in the reference static runs (edge energy under the
static split divided by edge energy running the whole model), and the rest
of the network shares the remainder in FLOP proportion.

Run from the repository root:  python3 scripts/gen_profiles.py
"""

import json
import math
import pathlib

F32 = 4


def conv(h, w, cin, cout, k, stride=1, pad=None, groups=1):
    if pad is None:
        pad = k // 2
    ho = (h + 2 * pad - k) // stride + 1
    wo = (w + 2 * pad - k) // stride + 1
    macs = ho * wo * cout * (cin // groups) * k * k
    return ho, wo, cout, macs


def vgg16():
    cfg = [64, 64, "M", 128, 128, "M", 256, 256, 256, "M",
           512, 512, 512, "M", 512, 512, 512, "M"]
    h = w = 224
    c = 3
    layers = []
    for v in cfg:
        if v == "M":
            h, w = h // 2, w // 2
            layers.append(("maxpool", h * w * c * F32, h * w * c * 4))
        else:
            h, w, cout, macs = conv(h, w, c, v, 3)
            c = cout
            layers.append(("conv", h * w * c * F32, macs))
            layers.append(("relu", h * w * c * F32, h * w * c))
    head = 25088 * 4096 + 4096 * 4096 + 4096 * 1000
    return layers, head


def alexnet():
    layers = []
    h, w, c, macs = conv(224, 224, 3, 64, 11, stride=4, pad=2)
    layers.append(("conv", h * w * c * F32, macs))
    layers.append(("relu", h * w * c * F32, h * w * c))
    h, w = (h - 3) // 2 + 1, (w - 3) // 2 + 1
    layers.append(("maxpool", h * w * c * F32, h * w * c * 9))
    h, w, c, macs = conv(h, w, c, 192, 5, pad=2)
    layers.append(("conv", h * w * c * F32, macs))
    layers.append(("relu", h * w * c * F32, h * w * c))
    h, w = (h - 3) // 2 + 1, (w - 3) // 2 + 1
    layers.append(("maxpool", h * w * c * F32, h * w * c * 9))
    for cout in (384, 256, 256):
        h, w, c, macs = conv(h, w, c, cout, 3)
        layers.append(("conv", h * w * c * F32, macs))
        layers.append(("relu", h * w * c * F32, h * w * c))
    h, w = (h - 3) // 2 + 1, (w - 3) // 2 + 1
    layers.append(("maxpool", h * w * c * F32, h * w * c * 9))
    # adaptive average pool to 6x6 is an identity reshape at 224x224 input
    layers.append(("avgpool", 6 * 6 * c * F32, 6 * 6 * c))
    head = 9216 * 4096 + 4096 * 4096 + 4096 * 1000
    return layers, head


def mobilenetv2():
    layers = []
    h, w, c, macs = conv(224, 224, 3, 32, 3, stride=2)
    layers.append(("conv_bn_relu", h * w * c * F32, macs))
    settings = [(1, 16, 1, 1), (6, 24, 2, 2), (6, 32, 3, 2), (6, 64, 4, 2),
                (6, 96, 3, 1), (6, 160, 3, 2), (6, 320, 1, 1)]
    for t, cout, n, s in settings:
        for k in range(n):
            stride = s if k == 0 else 1
            hidden = c * t
            macs = 0
            if t != 1:
                macs += h * w * c * hidden
            h2, w2, _, dw = conv(h, w, hidden, hidden, 3, stride=stride, groups=hidden)
            macs += dw
            macs += h2 * w2 * hidden * cout
            h, w, c = h2, w2, cout
            layers.append(("inverted_residual", h * w * c * F32, macs))
    macs = h * w * c * 1280
    c = 1280
    layers.append(("conv_bn_relu", h * w * c * F32, macs))
    head = h * w * c + 1280 * 1000
    return layers, head


# (builder, last edge feature index of the static split,
#  static edge energy J, single-device edge energy J)
MODELS = {
    "vgg16-like": (vgg16, 10, 2.297, 8.002),
    "alexnet-like": (alexnet, 9, 0.237, 1.589),
    "mobilenetv2-like": (mobilenetv2, 9, 0.624, 0.863),
}


def build(name):
    builder, edge_last, static_edge_j, single_edge_j = MODELS[name]
    layers, head = builder()
    costs = [float(l[2]) for l in layers] + [float(head)]
    edge_share = static_edge_j / single_edge_j
    edge_cost = sum(costs[: edge_last + 1])
    rest_cost = sum(costs[edge_last + 1:])
    weights = [c / edge_cost * edge_share for c in costs[: edge_last + 1]]
    weights += [c / rest_cost * (1.0 - edge_share) for c in costs[edge_last + 1:]]
    total = math.fsum(weights)
    weights = [x / total for x in weights]
    return {
        "name": name,
        "layer_names": [f"{i}:{l[0]}" for i, l in enumerate(layers)],
        "activation_bytes": [l[1] for l in layers],
        "compute_weights": weights,
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "profiles"
    out.mkdir(parents=True, exist_ok=True)
    for name in MODELS:
        prof = build(name)
        path = out / f"{name}.json"
        path.write_text(json.dumps(prof, indent=2) + "\n")
        print(f"{path.name}: N={len(prof['activation_bytes'])} "
              f"sum(W)={math.fsum(prof['compute_weights']):.12f}")


if __name__ == "__main__":
    main()
