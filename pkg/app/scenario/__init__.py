"""
Deterministic stand-ins for the tumor progression mapping algorithms and a
temperature-controlled heater, ready to be hosted as SmartWS.
"""
