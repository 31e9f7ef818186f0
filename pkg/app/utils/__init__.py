# -*- coding: utf-8 -*-
"""工具函数包

包含日志初始化、输出格式化、配置解析以及异常定义"""
