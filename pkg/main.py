#!/usr/bin/env python3
"""时间之矢数值实验命令行主入口

用法: python main.py <measure|lindblad|kaon|mix|ledger> --config FILE [--seed N] [--out PATH] [--format csv|json]
"""
import os
import sys

# 添加项目根目录到Python路径
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from app.cli import main


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
