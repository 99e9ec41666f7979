from tself.utils.load import load_yaml, read_artifact, write_artifact, write_text
from tself.utils.logutils import log_call
from tself.utils.path import resolve_pathish

__all__ = ["load_yaml", "read_artifact", "write_artifact", "write_text", "resolve_pathish", "log_call"]
