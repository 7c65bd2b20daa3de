import sys
import logging
import torch

__all__ = ["ng_dtype", "ng_device", "ng_seed", "ng_logger", "set_logging_output"]

ng_dtype = torch.float64
ng_device = "cuda:0" if torch.cuda.is_available() else "cpu"
# every stochastic step draws from this unless a manifest overrides it
ng_seed = 20131

ng_logger = logging.getLogger("neurogeom")
ng_logger.setLevel(logging.INFO)
ng_logger.propagate = False
err_handler = logging.StreamHandler(sys.stderr)
err_handler.setLevel(logging.INFO)
err_handler.setFormatter(logging.Formatter("%(message)s"))
ng_logger.addHandler(err_handler)


def set_logging_output(stream=True, filename=None, **kwargs):
    """
    Change the logging system for neurogeom.
    Here you can set whether diagnostics print to the terminal or to a logging file.
    This function will remove all handlers from the current logger in ng_logger,
    then add new handlers based on the input to the function.

    Diagnostics always go to standard error so that summaries printed on
    standard output stay machine readable.

    Parameters:
        stream (bool): If True, log messages will be printed to standard error. Default is True.
        filename (str): If given as a string, this will be the name of the file that log messages are written to.
                        If None, no logging file will be used. Default is None.
        stream_level (int): The logging level of messages written to stderr. Default is logging.INFO.
        stream_formatter (logging.Formatter): Formatter used for stderr messages. Default is logging.Formatter('%(message)s').
        filename_level (int): The logging level of messages written to the log file. Default is logging.INFO.
        filename_formatter (logging.Formatter): Formatter used for the log file. Default is logging.Formatter('%(asctime)s:%(levelname)s: %(message)s').

    """
    hi = 0
    while hi < len(ng_logger.handlers):
        if isinstance(
            ng_logger.handlers[hi], (logging.StreamHandler, logging.NullHandler)
        ):
            ng_logger.removeHandler(ng_logger.handlers[hi])
        else:
            hi += 1

    levels = []
    if stream:
        out_handler = logging.StreamHandler(sys.stderr)
        out_handler.setLevel(kwargs.get("stream_level", logging.INFO))
        out_handler.setFormatter(
            kwargs.get("stream_formatter", logging.Formatter("%(message)s"))
        )
        ng_logger.addHandler(out_handler)
        levels.append(out_handler.level)
    if filename is not None:
        out_handler = logging.FileHandler(filename)
        out_handler.setLevel(kwargs.get("filename_level", logging.INFO))
        out_handler.setFormatter(
            kwargs.get(
                "filename_formatter",
                logging.Formatter("%(asctime)s:%(levelname)s: %(message)s"),
            )
        )
        ng_logger.addHandler(out_handler)
        levels.append(out_handler.level)
    if len(levels) == 0:
        ng_logger.addHandler(logging.NullHandler())
    else:
        ng_logger.setLevel(min(levels))
    ng_logger.debug(f"logging now going to stderr={stream} file={filename}")
