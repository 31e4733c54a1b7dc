"""
Services: evolution runs, waypoint evaluation and plant identification
"""
