import sys
import json
import random

import numpy as np
import torch

from ..errors import NeuroGeomError, StorageError
from ..imgio import load_volume, save_volume
from ..volops import Binary_Mask, batch_volumes, fix_topology, gmm_segment
from ..mesh import marching_cubes, swap_xy, validate, load_mesh, save_mesh
from ..register import (
    read_landmarks,
    check_correspondence,
    estimate_affine,
    estimate_rigid,
    registration_residual,
    apply_affine,
    write_matrix,
)
from ..morpho import load_ensemble, average_template, displacement_field, export_scalar_mesh
from ..dti import (
    load_tensor_field,
    fa_map,
    fa_values,
    md_map,
    load_tracts,
    save_tracts,
    subsample_tracts,
    tract_endpoints,
    format_endpoints,
)
from ..utils.operations import atomic_write, staged_outputs
from .manifest import Run_Manifest
from .. import NG_config

__all__ = ["Command_Summary", "run", "render_text", "render_json"]


class Command_Summary(object):
    """What a command reports: ordered ``fields`` and an optional table
    given as a header tuple and a list of rows.

    """

    def __init__(self, fields=None, header=None, rows=None, status: int = 0) -> None:
        self.fields = list(fields or [])
        self.header = header
        self.rows = list(rows or [])
        self.status = status


def _format_value(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.6g" % value
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(_format_value(v) for v in value)
    return str(value)


def _plain(value):
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def render_text(summary: Command_Summary) -> str:
    lines = [f"{key}: {_format_value(value)}" for key, value in summary.fields]
    if summary.header is not None:
        lines.append("\t".join(summary.header))
        lines.extend("\t".join(_format_value(v) for v in row) for row in summary.rows)
    return "\n".join(lines) + "\n"


def render_json(summary: Command_Summary) -> str:
    obj = dict((key, _plain(value)) for key, value in summary.fields)
    if summary.header is not None:
        obj["table"] = [dict(zip(summary.header, _plain(list(row)))) for row in summary.rows]
    return json.dumps(obj, sort_keys=True) + "\n"


######################################################################
# Commands
######################################################################
def cmd_info(m: Run_Manifest) -> Command_Summary:
    header = load_volume(m.input("input")).header
    return Command_Summary(
        [
            ("format", header.format),
            ("endianness", header.endianness),
            ("dims", list(header.dims)),
            ("voxel_size", list(header.voxel_size)),
            ("datatype", header.datatype_name),
            ("bitpix", header.bitpix),
            ("description", header.description),
        ]
    )


def cmd_volume(m: Run_Manifest) -> Command_Summary:
    paths = m.inputs["input"]
    masks = [Binary_Mask.from_volume(load_volume(p)) for p in paths]
    rows = batch_volumes(masks, names=paths)
    fields = [("masks", len(rows))]
    if len(rows) == 1:
        fields += [("voxels", rows[0][1]), ("volume_mm3", rows[0][2])]
    return Command_Summary(fields, ("mask", "voxels", "volume_mm3"), rows)


def cmd_fix_topology(m: Run_Manifest) -> Command_Summary:
    vol = load_volume(m.input("input"))
    mask = Binary_Mask.from_volume(vol)
    fixed = fix_topology(mask, radius=m.params["radius"], connectivity=m.params["connectivity"])
    save_volume(fixed.to_volume(format=vol.header.format), m.outputs["out"])
    return Command_Summary(
        [
            ("voxels_before", mask.count),
            ("voxels_after", fixed.count),
            ("radius", m.params["radius"]),
            ("connectivity", m.params["connectivity"]),
        ]
    )


def cmd_extract_surface(m: Run_Manifest) -> Command_Summary:
    vol = load_volume(m.input("input")).pad(m.params["pad"])
    mesh = marching_cubes(vol, m.params["iso"])
    if m.params["swap_xy"]:
        mesh = swap_xy(mesh)
    report = validate(mesh)
    if not report.is_closed:
        NG_config.ng_logger.warning(
            f"extracted surface is open ({report.boundary_edges} boundary edges); "
            "the foreground may touch the volume boundary, try --pad 1"
        )
    save_mesh(mesh, m.outputs["out"])
    return Command_Summary(
        [
            ("V", report.V),
            ("F", report.F),
            ("chi", report.chi),
            ("closed", report.is_closed),
            ("genus", report.genus),
        ]
    )


def cmd_check_topology(m: Run_Manifest) -> Command_Summary:
    report = validate(load_mesh(m.input("input")))
    return Command_Summary(list(report.as_dict().items()), status=0 if report.is_sphere else 3)


def cmd_register(m: Run_Manifest) -> Command_Summary:
    P = read_landmarks(m.input("moving"))
    Q = read_landmarks(m.input("fixed"))
    check_correspondence(P, Q)
    A = estimate_rigid(P, Q) if m.params["rigid"] else estimate_affine(P, Q)
    rms, per_landmark = registration_residual(A, P, Q)
    moved = apply_affine(A, load_mesh(m.input("apply"))) if "apply" in m.inputs else None
    write_matrix(A, m.outputs["out"])
    if moved is not None:
        save_mesh(moved, m.outputs["out_mesh"])
    return Command_Summary(
        [
            ("transform", "rigid" if m.params["rigid"] else "affine"),
            ("landmarks", len(P)),
            ("det", A.det),
            ("rms", rms),
        ],
        ("label", "residual"),
        list(zip(P.labels, per_landmark.tolist())),
    )


def cmd_template(m: Run_Manifest) -> Command_Summary:
    ens = load_ensemble(m.input("input"))
    template = average_template(ens)
    save_mesh(template, m.outputs["out"])
    return Command_Summary(
        [("subjects", ens.n_subjects), ("V", template.n_vertices), ("F", template.n_faces)]
    )


def cmd_displacement(m: Run_Manifest) -> Command_Summary:
    ens = load_ensemble(m.input("input"))
    template = load_mesh(m.input("template"))
    index = ens.index_of(m.params["subject"])
    field = displacement_field(ens, template, index)
    extra = dict(("d" + axis, field.vectors[:, i]) for i, axis in enumerate("xyz"))
    export_scalar_mesh(template, field.lengths, m.outputs["out"], extra=extra)
    return Command_Summary(
        [
            ("subject", ens.subject_ids[index]),
            ("V", template.n_vertices),
            ("mean_length", float(field.lengths.mean())),
            ("max_length", float(field.lengths.max())),
        ]
    )


def cmd_fa(m: Run_Manifest) -> Command_Summary:
    field = load_tensor_field(m.inputs["tensors"])
    save_volume(fa_map(field), m.outputs["out"])
    if "md_out" in m.outputs:
        save_volume(md_map(field), m.outputs["md_out"])
    lambdas, _ = field.eigen()
    zero = field.zero_voxels()
    values = fa_values(lambdas)[~zero]
    return Command_Summary(
        [
            ("dims", list(field.dims)),
            ("voxels", len(zero)),
            ("zero_voxels", int(zero.sum())),
            ("negative_voxels", field.negative_count),
            ("fa_mean", float(values.mean()) if len(values) else None),
        ]
    )


def cmd_tracts_subsample(m: Run_Manifest) -> Command_Summary:
    tracts = load_tracts(m.input("input"))
    kept = subsample_tracts(tracts, m.params["stride"], m.params["min_points"])
    save_tracts(kept, m.outputs["output"], packed=m.params["packed"])
    return Command_Summary([("tracts_in", len(tracts)), ("tracts_out", len(kept))])


def cmd_tracts_endpoints(m: Run_Manifest) -> Command_Summary:
    tracts = load_tracts(m.input("input"))
    ends = tract_endpoints(tracts)
    atomic_write(m.outputs["out"], format_endpoints(ends))
    return Command_Summary([("tracts", len(tracts)), ("endpoints", len(ends))])


def cmd_segment(m: Run_Manifest) -> Command_Summary:
    vol = load_volume(m.input("input"))
    result = gmm_segment(vol, K=m.params["classes"], max_iters=m.params["max_iters"], tol=m.params["tol"])
    prefix = m.outputs["out"]
    for k in range(result.class_count):
        save_volume(result.class_volume(k), f"{prefix}_class{k + 1}.nii")
    return Command_Summary(list(result.summary().items()))


COMMAND_FUNCTIONS = {
    "info": cmd_info,
    "volume": cmd_volume,
    "fix-topology": cmd_fix_topology,
    "extract-surface": cmd_extract_surface,
    "check-topology": cmd_check_topology,
    "register": cmd_register,
    "template": cmd_template,
    "displacement": cmd_displacement,
    "fa": cmd_fa,
    "tracts-subsample": cmd_tracts_subsample,
    "tracts-endpoints": cmd_tracts_endpoints,
    "segment": cmd_segment,
}


def seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def run(manifest: Run_Manifest, stdout=None, stderr=None) -> int:
    """Validate and execute one manifest, print its summary and return
    the process exit status.

    Errors of this package map to their ``exit_code``; operating system
    I/O errors map to the storage code. Either way ``error: <message>``
    is printed to standard error and no summary is printed. Outputs are
    staged and only renamed into place once the command has succeeded.

    """
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        try:
            manifest.validate()
            seed_everything(manifest.seed)
            NG_config.ng_logger.debug(f"running {manifest.command} with seed {manifest.seed}")
            with staged_outputs():
                summary = COMMAND_FUNCTIONS[manifest.command](manifest)
        except OSError as e:
            raise StorageError(str(e)) from e
    except NeuroGeomError as e:
        NG_config.ng_logger.debug(f"{manifest.command} failed", exc_info=True)
        stderr.write(f"error: {e}\n")
        return e.exit_code
    stdout.write(render_json(summary) if manifest.json else render_text(summary))
    return summary.status
