"""Published error tables, keyed by bundled config name.

Deterministic cells hold the error; random cells hold (mean, std).
"""

DET_L = (128, 256, 512, 1024)
RAND_L = (128, 256, 512)

REFERENCE = {
    "bw_det": {
        2: (0.047589, 0.047764, 0.047736, 0.047737),
        3: (0.024612, 0.024531, 0.024501, 0.024493),
        4: (0.015719, 0.014764, 0.014721, 0.014679),
        5: (0.011928, 0.011391, 0.011210, 0.011187),
        6: (0.010612, 0.010224, 0.010148, 0.010130),
    },
    "lr_det": {
        2: (0.057454, 0.057596, 0.057607, 0.057608),
        4: (0.016257, 0.014810, 0.014751, 0.014746),
        6: (0.011089, 0.010655, 0.010572, 0.010549),
        8: (0.010621, 0.010392, 0.010256, 0.010236),
        10: (0.010860, 0.010471, 0.010366, 0.010338),
    },
    "ci_det": {
        2: (0.171328, 0.171823, 0.171814, 0.171808),
        3: (0.065488, 0.065305, 0.065298, 0.065301),
        4: (0.021102, 0.021020, 0.020917, 0.020907),
        5: (0.012131, 0.011623, 0.011495, 0.011465),
        6: (0.010139, 0.009888, 0.009749, 0.009709),
    },
    "cii_det": {
        2: (0.022445, 0.022410, 0.022303, 0.022301),
        3: (0.036950, 0.036805, 0.036705, 0.036701),
        4: (0.053139, 0.052810, 0.052770, 0.052755),
        5: (0.062381, 0.061689, 0.061610, 0.061596),
        6: (0.079740, 0.078643, 0.078510, 0.078492),
    },
    "bw_rand": {
        2: ((0.065750, 0.006140), (0.066069, 0.006140), (0.065991, 0.006073)),
        3: ((0.064114, 0.006371), (0.063839, 0.006325), (0.064141, 0.006360)),
        4: ((0.063366, 0.006548), (0.063248, 0.006611), (0.063151, 0.006596)),
        5: ((0.062816, 0.006658), (0.062779, 0.006667), (0.062742, 0.006667)),
        6: ((0.062612, 0.006829), (0.062378, 0.006607), (0.062498, 0.006765)),
    },
    "lr_rand": {
        2: ((0.069214, 0.007119), (0.069267, 0.007161), (0.069370, 0.007141)),
        4: ((0.057452, 0.006231), (0.056937, 0.006261), (0.056956, 0.006295)),
        6: ((0.058282, 0.006528), (0.057997, 0.006490), (0.058098, 0.006584)),
        8: ((0.058779, 0.006649), (0.058706, 0.006690), (0.058582, 0.006683)),
        10: ((0.059029, 0.006784), (0.058999, 0.006719), (0.059055, 0.006689)),
    },
    "ci_rand": {
        2: ((0.096526, 0.006469), (0.100908, 0.006239), (0.101290, 0.006236)),
        3: ((0.079350, 0.006596), (0.079449, 0.006545), (0.079384, 0.006530)),
        4: ((0.071808, 0.006691), (0.071758, 0.006694), (0.071702, 0.006697)),
        5: ((0.068183, 0.006861), (0.068015, 0.006759), (0.068038, 0.006843)),
        6: ((0.066051, 0.006820), (0.065990, 0.006856), (0.065947, 0.006895)),
    },
    "cii_rand": {
        2: ((0.048527, 0.006313), (0.048451, 0.006310), (0.048447, 0.006290)),
        3: ((0.070567, 0.008081), (0.070621, 0.008134), (0.070434, 0.008009)),
        4: ((0.096689, 0.009690), (0.096749, 0.009839), (0.096935, 0.009852)),
        5: ((0.127415, 0.013328), (0.127424, 0.013173), (0.127248, 0.013351)),
        6: ((0.181272, 0.021788), (0.181213, 0.021586), (0.181538, 0.022092)),
    },
    "bw_det_zero": {
        2: (0.048311, 0.047964, 0.047843, 0.047794),
        3: (0.026638, 0.025594, 0.025049, 0.024766),
        4: (0.019984, 0.017576, 0.015995, 0.015353),
        5: (0.020383, 0.015491, 0.013464, 0.012332),
        6: (0.019329, 0.015356, 0.013017, 0.011682),
    },
    "bw_rand_zero": {
        2: ((0.066455, 0.006000), (0.066301, 0.006067), (0.066147, 0.006097)),
        3: ((0.064922, 0.006329), (0.064288, 0.006304), (0.064137, 0.006397)),
        4: ((0.064450, 0.006415), (0.063860, 0.006544), (0.063458, 0.006520)),
        5: ((0.065015, 0.006391), (0.063500, 0.006562), (0.063186, 0.006524)),
        6: ((0.064580, 0.006484), (0.063398, 0.006572), (0.063071, 0.006603)),
    },
}

#: Full-interval a-priori noise norm, deterministic noise, by L.
APRIORI_UPPER_DET = {128: 0.244825, 256: 0.245471, 512: 0.245497, 1024: 0.245500}

#: Full-interval a-priori noise norm, random noise: (mean, std) by L.
APRIORI_UPPER_RAND = {128: (0.112872, 0.007051), 256: (0.159906, 0.007093), 512: (0.226173, 0.007090)}

#: A-priori error on [0, T - tau] for the third-order Butterworth filter.
APRIORI_BW3 = {128: 0.242112, 256: 0.242318, 512: 0.242319, 1024: 0.242319}
