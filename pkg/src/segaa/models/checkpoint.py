"""Single-file checkpoint container.

Layout: the magic bytes ``SEGAA1``, a little-endian u32 header length, a JSON
header, then the concatenated float32 little-endian array payloads. The header
carries everything needed to rebuild the networks (architecture tables, seeds,
array shape/offset tables) plus the standardizer, label schema, config
snapshot, metrics, and cascade metadata, so a checkpoint alone is enough to
serve predictions.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..data.schema import AGE_BINS, EMOTIONS, GENDERS
from ..data.standardize import Standardizer
from .build import Cascade, CascadeSpec
from .network import Network

MAGIC = b"SEGAA1"


class CheckpointError(RuntimeError):
    """A checkpoint file that cannot be read back."""


def save_checkpoint(path, networks, standardizer=None, config=None, metrics=None,
                    cascade=None):
    """Write networks and their context to a single file.

    networks is a list of (name, Network) pairs; for a cascade, pass its
    stages in order and the CascadeSpec as cascade.
    """
    net_table = []
    chunks = []
    offset = 0
    for name, net in networks:
        entries = []
        for arr in net.params() + net.buffers():
            flat = np.ascontiguousarray(arr, dtype="<f4")
            entries.append({"shape": list(arr.shape), "offset": offset,
                            "size": int(flat.size)})
            chunks.append(flat.tobytes())
            offset += flat.size * 4
        net_table.append({"name": name, "seed": net.seed, "arch": net.arch,
                          "arrays": entries})
    scaler = None
    if standardizer is not None:
        scaler = {"mean": standardizer.mean.tolist(), "std": standardizer.std.tolist()}
    cascade_meta = None
    if cascade is not None:
        spec = cascade.spec if isinstance(cascade, Cascade) else cascade
        cascade_meta = {"order": list(spec.order), "family": spec.family,
                        "use_all_previous": spec.use_all_previous,
                        "stage_names": [name for name, _ in networks]}
    header = {
        "format": 1,
        "networks": net_table,
        "standardizer": scaler,
        "schema": {"emotions": list(EMOTIONS), "genders": list(GENDERS),
                   "age_bins": list(AGE_BINS)},
        "config": dict(config or {}),
        "metrics": dict(metrics or {}),
        "cascade": cascade_meta,
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for chunk in chunks:
            fh.write(chunk)
    return path


@dataclass
class CheckpointBundle:
    networks: dict
    standardizer: Standardizer | None
    schema: dict
    config: dict
    metrics: dict
    cascade: Cascade | None = None
    names: list = field(default_factory=list)

    def network(self, name=None) -> Network:
        if name is None:
            if len(self.networks) != 1:
                raise CheckpointError(
                    f"checkpoint holds {sorted(self.networks)}; pick one by name")
            name = next(iter(self.networks))
        if name not in self.networks:
            raise CheckpointError(f"checkpoint has no network named {name!r}")
        return self.networks[name]


def load_checkpoint(path) -> CheckpointBundle:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if len(data) < len(MAGIC) + 4:
        raise CheckpointError(f"{path} is too short to be a checkpoint")
    if data[: len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path} is not a checkpoint (bad magic)")
    (header_len,) = struct.unpack_from("<I", data, len(MAGIC))
    start = len(MAGIC) + 4
    if len(data) < start + header_len:
        raise CheckpointError(f"{path} is truncated inside the header")
    try:
        header = json.loads(data[start : start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path} has a corrupt header: {exc}") from exc
    payload = data[start + header_len :]

    networks = {}
    names = []
    for nh in header["networks"]:
        net = Network(nh["arch"], seed=nh["seed"])
        arrays = net.params() + net.buffers()
        if len(arrays) != len(nh["arrays"]):
            raise CheckpointError(
                f"{path}: array table for {nh['name']!r} does not match the architecture")
        for arr, meta in zip(arrays, nh["arrays"]):
            if list(arr.shape) != list(meta["shape"]):
                raise CheckpointError(
                    f"{path}: shape {meta['shape']} in {nh['name']!r} does not match "
                    f"the architecture's {list(arr.shape)}")
            end = meta["offset"] + 4 * meta["size"]
            if end > len(payload):
                raise CheckpointError(f"{path} is truncated inside the payload")
            vals = np.frombuffer(payload, dtype="<f4", count=meta["size"],
                                 offset=meta["offset"]).reshape(meta["shape"])
            arr[...] = vals
        networks[nh["name"]] = net
        names.append(nh["name"])

    scaler = None
    if header.get("standardizer"):
        scaler = Standardizer(
            mean=np.asarray(header["standardizer"]["mean"], dtype=np.float64),
            std=np.asarray(header["standardizer"]["std"], dtype=np.float64),
        )
    cascade = None
    if header.get("cascade"):
        meta = header["cascade"]
        spec = CascadeSpec(order=tuple(meta["order"]), family=meta["family"],
                           use_all_previous=meta["use_all_previous"])
        stages = [(t, networks[n]) for t, n in zip(spec.order, meta["stage_names"])]
        cascade = Cascade(spec=spec, stages=stages)
    return CheckpointBundle(networks=networks, standardizer=scaler,
                            schema=header["schema"], config=header["config"],
                            metrics=header["metrics"], cascade=cascade, names=names)
