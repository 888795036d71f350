"""mincrystal: minimal F-crystals, level torsion and isomorphism-number bounds"""
