from .config import RunConfig, RunConfigDict, load_config
from .artifacts import collate, read_hash
from .commands import cmd_verify_bounds, cmd_scaling, cmd_search, cmd_certify, cmd_report, COMMANDS
from .main import main, build_parser
