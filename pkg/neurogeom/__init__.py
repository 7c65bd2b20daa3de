import sys
import argparse
import torch
from . import errors, utils, imgio, volops, mesh, fit, register, morpho, dti, NG_config
from .parse_config import Run_Manifest, read_manifest, run

# meta data
__version__ = "0.1.0"
__author__ = "neurogeom developers"
__email__ = "neurogeom@users.noreply.github.com"

GLOBAL_DESTS = ("command", "action", "manifest", "json", "seed", "log", "q", "dtype", "device")


class NG_Argument_Parser(argparse.ArgumentParser):
    """Argument parser that reports bad flags as a UsageError (exit 1)."""

    def error(self, message):
        raise errors.UsageError(f"{self.prog}: {message}")


def _shared_flags() -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    shared = NG_Argument_Parser(add_help=False, argument_default=argparse.SUPPRESS)
    shared.add_argument(
        "--manifest",
        type=str,
        metavar="run.cfg",
        help="flat 'key = value' file supplying any flag; flags given on the command line win",
    )
    shared.add_argument(
        "--json",
        action="store_true",
        help="print the summary as a single JSON object",
    )
    shared.add_argument(
        "--seed",
        type=int,
        metavar="int",
        help=f"seed for every stochastic step (default {NG_config.ng_seed})",
    )
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = NG_Argument_Parser(
        prog="neurogeom",
        description="Geometry from binary medical-image volumes: volumetry, topology correction, surface extraction, landmark registration, surface morphometry and diffusion tensor measures.",
        epilog="Every flag can also be given as 'key = value' in a --manifest file.",
        parents=[shared],
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
        help="print the current neurogeom version to screen",
    )
    parser.add_argument(
        "--log",
        type=str,
        metavar="logfile.log",
        help="set the log file name for neurogeom. use 'none' to suppress the log file.",
    )
    parser.add_argument(
        "-q",
        action="store_true",
        default=None,
        help="quiet flag to stop diagnostics on stderr, only print to log file",
    )
    parser.add_argument(
        "--dtype",
        type=str,
        choices=["float64", "float32"],
        metavar="datatype",
        help="set the float point precision of fitting. Must be one of: float64, float32",
    )
    parser.add_argument(
        "--device",
        type=str,
        choices=["cpu", "gpu"],
        metavar="device",
        help="set the device for fitting computations. Must be one of: cpu, gpu",
    )

    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("info", parents=[shared], help="print volume header fields")
    p.add_argument("input", nargs="?", help="Analyze (.hdr/.img or prefix) or NIfTI-1 (.nii) volume")

    p = sub.add_parser("volume", parents=[shared], help="voxel count and volume of binary masks")
    p.add_argument("input", nargs="*", help="one or more mask volumes")

    p = sub.add_parser("fix-topology", parents=[shared], help="keep the largest component and close small holes")
    p.add_argument("input", nargs="?", help="mask volume")
    p.add_argument("--radius", type=int, help="closing ball radius in voxels (default 1)")
    p.add_argument("--connectivity", type=int, choices=[6, 18, 26], help="component connectivity (default 6)")
    p.add_argument("--out", type=str, help="output prefix (Analyze pair) or .nii path")

    p = sub.add_parser("extract-surface", parents=[shared], help="marching cubes isosurface to PLY or OBJ")
    p.add_argument("input", nargs="?", help="volume")
    p.add_argument("--iso", type=float, help="isovalue (default 0.5)")
    p.add_argument("--pad", type=int, help="zero pad this many voxels first (default 0)")
    p.add_argument("--swap-xy", action="store_true", default=None, help="swap x and y of the vertices")
    p.add_argument("--out", type=str, help="mesh path, .ply or .obj")

    p = sub.add_parser("check-topology", parents=[shared], help="validate a mesh; exit 0 only for a closed sphere")
    p.add_argument("input", nargs="?", help="mesh path, .ply or .obj")

    p = sub.add_parser("register", parents=[shared], help="least squares landmark registration")
    p.add_argument("--moving", type=str, help="moving landmarks CSV (label,x,y,z)")
    p.add_argument("--fixed", type=str, help="fixed landmarks CSV (label,x,y,z)")
    p.add_argument("--rigid", action="store_true", default=None, help="fit a rotation and translation only")
    p.add_argument("--out", type=str, help="4x4 matrix output")
    p.add_argument("--apply", type=str, help="mesh to move with the fitted transform")
    p.add_argument("--out-mesh", type=str, help="output path for the moved mesh")

    p = sub.add_parser("template", parents=[shared], help="average surface of an ensemble")
    p.add_argument("input", nargs="?", help="ensemble manifest CSV or packed NGEN1 file")
    p.add_argument("--out", type=str, help="template mesh path")

    p = sub.add_parser("displacement", parents=[shared], help="per-vertex displacement of one subject from a template")
    p.add_argument("input", nargs="?", help="ensemble manifest CSV or packed NGEN1 file")
    p.add_argument("--subject", type=str, help="subject index or id (default 0)")
    p.add_argument("--template", type=str, help="template mesh")
    p.add_argument("--out", type=str, help="PLY with the displacement length in 'quality'")

    p = sub.add_parser("fa", parents=[shared], help="fractional anisotropy map from six tensor volumes")
    p.add_argument("--tensors", nargs=6, metavar="D", help="dxx dyy dzz dxy dxz dyz volumes")
    p.add_argument("--out", type=str, help="FA volume path")
    p.add_argument("--md-out", type=str, help="optional mean diffusivity volume path")

    p = sub.add_parser("tracts", parents=[shared], help="tract file operations")
    actions = p.add_subparsers(dest="action", metavar="action")
    a = actions.add_parser("subsample", parents=[shared], help="keep every stride-th tract")
    a.add_argument("input", nargs="?", help="tract file, text or NGTR1")
    a.add_argument("output", nargs="?", help="output tract file")
    a.add_argument("--stride", type=int, help="keep tracts at indices divisible by this (default 30)")
    a.add_argument("--min-points", type=int, help="drop tracts with this many points or fewer (default 0)")
    a.add_argument("--packed", action="store_true", default=None, help="write NGTR1 instead of text")
    a = actions.add_parser("endpoints", parents=[shared], help="CSV of both ends of every tract")
    a.add_argument("input", nargs="?", help="tract file, text or NGTR1")
    a.add_argument("--out", type=str, help="CSV output path")

    p = sub.add_parser("segment", parents=[shared], help="Gaussian mixture tissue segmentation")
    p.add_argument("input", nargs="?", help="intensity volume")
    p.add_argument("--classes", type=int, help="number of tissue classes (default 3)")
    p.add_argument("--max-iters", type=int, help="EM iteration limit (default 500)")
    p.add_argument("--tol", type=float, help="log-likelihood change for convergence (default 1e-8)")
    p.add_argument("--out", type=str, help="prefix, class k goes to <prefix>_class<k>.nii")

    return parser


def manifest_from_args(args: argparse.Namespace) -> Run_Manifest:
    """Merge defaults, the manifest file and command line flags, in rising
    order of precedence.

    """
    values = {}
    manifest_path = getattr(args, "manifest", None)
    if manifest_path is not None:
        values = read_manifest(manifest_path)

    command = args.command or values.pop("command", None)
    if command is None:
        raise errors.UsageError("no command given, see 'neurogeom --help'")
    if command == "tracts":
        action = getattr(args, "action", None) or values.pop("action", None)
        if action is None:
            raise errors.UsageError("tracts needs an action: subsample or endpoints")
        command = f"tracts-{action}"
    values.pop("action", None)

    for key, value in vars(args).items():
        if key in GLOBAL_DESTS or value is None:
            continue
        if isinstance(value, list) and len(value) == 0:
            continue
        values[key] = value
    if getattr(args, "json", None):
        values["json"] = True
    if getattr(args, "seed", None) is not None:
        values["seed"] = args.seed
    return Run_Manifest.from_values(command, values)


def execute(argv=None) -> int:
    """
    Run one neurogeom command and return its exit status.

    Global options follow the usual neurogeom conventions:

    - `--log`: set the log file name. Use 'none' to suppress the log file.
    - `-q`: quiet flag, diagnostics go only to the log file.
    - `--dtype`, `--device`: precision and device of the torch based fitting.
    - `--manifest`, `--json`, `--seed`: run manifest, JSON summary and seed.

    Exit status is 0 on success, 1 for usage errors, 2 for malformed
    input, 3 for numeric or degenerate input (and for a mesh that is not
    a closed sphere under check-topology) and 4 for I/O failures.

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except errors.UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code

    if args.log is not None:
        NG_config.set_logging_output(
            stream=not args.q, filename=None if args.log == "none" else args.log
        )
    elif args.q:
        NG_config.set_logging_output(stream=False, filename="neurogeom.log")

    if args.dtype is not None:
        NG_config.ng_dtype = torch.float64 if args.dtype == "float64" else torch.float32
    if args.device is not None:
        NG_config.ng_device = "cpu" if args.device == "cpu" else "cuda:0"

    try:
        manifest = manifest_from_args(args)
    except errors.NeuroGeomError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    return run(manifest)


def run_from_terminal() -> None:
    """Console script entry point; exits with the status of :func:`execute`."""
    NG_config.ng_logger.debug("running from the terminal")
    sys.exit(execute())
