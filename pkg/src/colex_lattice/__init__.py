# Construction et validation des 3-colexes
