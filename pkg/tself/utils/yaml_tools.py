"""
tself.utils.yaml_tools - YAML helpers for config files and CV reports
"""

import yaml


class FlowList(list):
    """List that always dumps in YAML flow style: [a, b, c]."""
    pass

def _represent_flow_seq(dumper, data):
    return dumper.represent_sequence("tag:yaml.org,2002:seq", data, flow_style=True)

class TselfDumper(yaml.SafeDumper):
    """Scoped dumper for tself so we don't mutate global PyYAML state."""
    pass

# Register representers on our dumper (safe + scoped)
TselfDumper.add_representer(FlowList, _represent_flow_seq)


def dump_no_wrap(data: dict) -> str:
    """
    Dump YAML without automatic line-wrapping; per-fold lists stay on one line
    when wrapped in FlowList.
    """
    return yaml.dump(
        data,
        Dumper=TselfDumper,
        sort_keys=False,
        width=10**9,
        allow_unicode=True,
    )

__all__ = ["FlowList", "TselfDumper", "dump_no_wrap"]
