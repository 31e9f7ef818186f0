# -*- coding: utf-8 -*-
"""时间之矢数值实验主包"""
