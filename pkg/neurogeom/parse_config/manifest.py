import os
from typing import Dict, Optional

from ..errors import UsageError, StorageError
from .. import NG_config

__all__ = ["COMMANDS", "Run_Manifest", "read_manifest", "parse_manifest_text"]

# Per command: input arity (1, "?", "+" or an exact count), outputs
# (True when required) and parameters as (type, default).
COMMANDS = {
    "info": {
        "inputs": {"input": 1},
        "outputs": {},
        "params": {},
    },
    "volume": {
        "inputs": {"input": "+"},
        "outputs": {},
        "params": {},
    },
    "fix-topology": {
        "inputs": {"input": 1},
        "outputs": {"out": True},
        "params": {"radius": (int, 1), "connectivity": (int, 6)},
    },
    "extract-surface": {
        "inputs": {"input": 1},
        "outputs": {"out": True},
        "params": {"iso": (float, 0.5), "pad": (int, 0), "swap_xy": (bool, False)},
    },
    "check-topology": {
        "inputs": {"input": 1},
        "outputs": {},
        "params": {},
    },
    "register": {
        "inputs": {"moving": 1, "fixed": 1, "apply": "?"},
        "outputs": {"out": True, "out_mesh": False},
        "params": {"rigid": (bool, False)},
    },
    "template": {
        "inputs": {"input": 1},
        "outputs": {"out": True},
        "params": {},
    },
    "displacement": {
        "inputs": {"input": 1, "template": 1},
        "outputs": {"out": True},
        "params": {"subject": (str, "0")},
    },
    "fa": {
        "inputs": {"tensors": 6},
        "outputs": {"out": True, "md_out": False},
        "params": {},
    },
    "tracts-subsample": {
        "inputs": {"input": 1},
        "outputs": {"output": True},
        "params": {"stride": (int, 30), "min_points": (int, 0), "packed": (bool, False)},
    },
    "tracts-endpoints": {
        "inputs": {"input": 1},
        "outputs": {"out": True},
        "params": {},
    },
    "segment": {
        "inputs": {"input": 1},
        "outputs": {"out": True},
        "params": {"classes": (int, 3), "max_iters": (int, 500), "tol": (float, 1e-8)},
    },
}

GLOBAL_KEYS = ("command", "seed", "json")
TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off", "")


def normalize_command(name: str) -> str:
    name = " ".join(str(name).split()).replace(" ", "-").replace("_", "-")
    if name not in COMMANDS:
        raise UsageError(f"unknown command '{name}'")
    return name


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def convert(kind, value, key: str):
    if isinstance(value, kind) and not (kind is int and isinstance(value, bool)):
        return value
    try:
        if kind is bool:
            word = str(value).strip().lower()
            if word in TRUE_WORDS:
                return True
            if word in FALSE_WORDS:
                return False
            raise ValueError(word)
        return kind(value)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad value '{value}' for {key}") from e


def _input_exists(path: str) -> bool:
    if os.path.exists(path):
        return True
    # an Analyze pair may be named by its prefix
    return os.path.exists(path + ".hdr")


class Run_Manifest(object):
    """One command invocation: which subcommand, its input and output paths,
    its parameters and the seed for stochastic steps.

    Inputs are lists of paths; parameters are converted to their declared
    types and missing ones take their defaults.

    """

    def __init__(
        self,
        command: str,
        inputs: Optional[Dict] = None,
        outputs: Optional[Dict] = None,
        params: Optional[Dict] = None,
        seed: Optional[int] = None,
        json: bool = False,
    ) -> None:
        self.command = normalize_command(command)
        layout = COMMANDS[self.command]

        self.inputs = {}
        for key, value in (inputs or {}).items():
            key = normalize_key(key)
            if key not in layout["inputs"]:
                raise UsageError(f"'{key}' is not an input of {self.command}")
            if value is None:
                continue
            paths = value.split() if isinstance(value, str) else [str(v) for v in value]
            self.inputs[key] = paths

        self.outputs = {}
        for key, value in (outputs or {}).items():
            key = normalize_key(key)
            if key not in layout["outputs"]:
                raise UsageError(f"'{key}' is not an output of {self.command}")
            if value is not None:
                self.outputs[key] = str(value)

        self.params = {key: default for key, (_, default) in layout["params"].items()}
        for key, value in (params or {}).items():
            key = normalize_key(key)
            if key not in layout["params"]:
                raise UsageError(f"'{key}' is not a parameter of {self.command}")
            if value is not None:
                self.params[key] = convert(layout["params"][key][0], value, key)

        self.seed = NG_config.ng_seed if seed is None else convert(int, seed, "seed")
        self.json = convert(bool, json, "json")

    @classmethod
    def from_values(cls, command: str, values: Dict) -> "Run_Manifest":
        """Sort flat key/value pairs into inputs, outputs and parameters."""
        command = normalize_command(command)
        layout = COMMANDS[command]
        inputs, outputs, params = {}, {}, {}
        seed, json = None, False
        for key, value in values.items():
            key = normalize_key(key)
            if key == "seed":
                seed = value
            elif key == "json":
                json = value
            elif key in ("command", "action"):
                continue
            elif key in layout["inputs"]:
                inputs[key] = value
            elif key in layout["outputs"]:
                outputs[key] = value
            elif key in layout["params"]:
                params[key] = value
            else:
                raise UsageError(f"unknown key '{key}' for {command}")
        return cls(command, inputs, outputs, params, seed, json)

    def input(self, key: str) -> Optional[str]:
        paths = self.inputs.get(key)
        return paths[0] if paths else None

    def validate(self) -> "Run_Manifest":
        """Check arities, required outputs and that every input exists."""
        layout = COMMANDS[self.command]
        for key, arity in layout["inputs"].items():
            paths = self.inputs.get(key, [])
            if arity == "?":
                ok = len(paths) <= 1
            elif arity == "+":
                ok = len(paths) >= 1
            else:
                ok = len(paths) == arity
            if not ok:
                raise UsageError(f"{self.command} needs {arity} path(s) for '{key}', got {len(paths)}")
            for path in paths:
                if not _input_exists(path):
                    raise UsageError(f"input not found: {path}")
        for key, required in layout["outputs"].items():
            if required and key not in self.outputs:
                raise UsageError(f"{self.command} needs an output path for '{key}'")
        if self.command == "register" and ("apply" in self.inputs) != ("out_mesh" in self.outputs):
            raise UsageError("--apply and --out-mesh go together")
        return self


def parse_manifest_text(text: str) -> Dict[str, str]:
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    values = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"manifest line {n} is not 'key = value'")
        key, value = line.split("=", 1)
        values[normalize_key(key)] = value.strip()
    return values


def read_manifest(path: str) -> Dict[str, str]:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise StorageError(f"could not read manifest {path}: {e}") from e
    values = parse_manifest_text(text)
    NG_config.ng_logger.debug(f"manifest {path}: {values}")
    return values
