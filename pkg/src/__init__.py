﻿"""Orbitas reducibles - conteo exacto de orbitas enteras del grupo ortogonal partido"""
