# -*- coding: utf-8 -*-
"""世界账本包"""
from .ledger import World, WorldLedger, LedgerStats, ledger_stats
from .script import ScriptResult, parse_script, run_script

__all__ = ['World', 'WorldLedger', 'LedgerStats', 'ledger_stats',
           'ScriptResult', 'parse_script', 'run_script']
