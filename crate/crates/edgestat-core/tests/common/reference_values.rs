// Generated by tests/oracle/generate.py; do not edit by hand.
#![allow(dead_code, clippy::excessive_precision)]
pub const AIRY: &[(f64, f64, f64)] = &[
    (-3.0e+1, -8.7968188456842162833e-2, 1.2286206026374851347),
    (-2.75e+1, 1.102330052599805234e-1, 1.1564575976664855882),
    (-2.5300000000000000711e+1, -1.8035384747745436742e-1, 8.8033121259189682627e-1),
    (-2.0e+1, -1.7640612707798468959e-1, 8.928628567364712384e-1),
    (-1.55e+1, -1.6644795409041976739e-1, 9.0493793543021219951e-1),
    (-1.2e+1, -6.6555175054373129474e-2, 1.0231104533679707299),
    (-9.5999999999999996447, 3.1465158331169332861e-1, 1.969504423212580408e-1),
    (-9.0999999999999996447, 7.495988727355446389e-2, -9.5149681545191793984e-1),
    (-8.9000000000000003553, -1.1726630637175180866e-1, -9.1289275742525020261e-1),
    (-7.2999999999999998224, 3.3577037051514727697e-1, -1.8009580448329365985e-1),
    (-5.0, 3.5076100902411431979e-1, 3.2719281855444313679e-1),
    (-3.8999999999999999112, -1.4741990564074426142e-1, -7.4755808553547742092e-1),
    (-2.5, -1.1232506769296608919e-1, 6.7885273426479436337e-1),
    (-1.0, 5.355608832923521188e-1, -1.0160567116645209395e-2),
    (-2.999999999999999889e-1, 4.309030952855808556e-1, -2.4054512725815461017e-1),
    (0.0, 3.5502805388781723926e-1, -2.5881940379280679841e-1),
    (2.000000000000000111e-1, 3.0370315428638199209e-1, -2.5240547028561953544e-1),
    (1.0, 1.3529241631288141552e-1, -1.5914744129679321279e-1),
    (2.7000000000000001776, 1.1198535451065877517e-2, -1.9325560692377632169e-2),
    (5.0, 1.0834442813607441735e-4, -2.47413890868462476e-4),
    (7.7000000000000001776, 1.0976168502027778761e-7, -3.0804239001035913614e-7),
    (8.9000000000000003553, 3.3420610425186999076e-9, -1.0062109921836912133e-8),
    (9.3000000000000007105, 9.8926866131642458592e-10, -3.0428998756186442299e-9),
    (1.2e+1, 1.393184688875360839e-13, -4.854736554985308463e-13),
    (2.0e+1, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
    (3.0e+1, 3.2082175915504955711e-49, -1.7598765814327259821e-48),
];
pub const AIRY_ENVELOPE_POS: f64 = 2.820118665384814125e-1;
pub const AIRY_ENVELOPE_NEG: f64 = 5.6418895728133408154e-1;
pub const AIRY_FIRST_ZERO: f64 = -2.3381074104597670385;
pub const HERMITE: &[(usize, f64, f64)] = &[
    (0, -5.0, 2.7991843929095967389e-6),
    (0, -3.8500000000000000888, 4.5399132344401281832e-4),
    (0, -1.5500000000000000444, 2.2595204975143879211e-1),
    (0, 6.4999999999999997016e-3, 7.5110967710541523604e-1),
    (0, 2.5, 3.3002153190001934481e-2),
    (0, 4.6500000000000003553, 1.5151174996942734138e-5),
    (0, 5.0, 2.7991843929095967389e-6),
    (1, -6.4142135623730949234, -7.9335891786611357239e-9),
    (1, -4.9389444430272835262, -2.6482051562535597765e-5),
    (1, -1.9884062043356593996, -2.9253964518413225438e-1),
    (1, 8.3384776310850231701e-3, 8.8572560450001811831e-3),
    (1, 3.2071067811865474617, 1.990057570626944697e-2),
    (1, 5.9652186130069786429, 1.1882907421650142171e-7),
    (1, 6.4142135623730949234, 7.9335891786611357239e-9),
    (5, -8.1622776601683799669, -4.4393219210088521274e-11),
    (5, -6.2849537983296519528, -8.8138947648118122232e-6),
    (5, -2.5303060746521977009, -5.086204176225932142e-1),
    (5, 1.0610960958218892264e-2, 1.5430970179585256934e-2),
    (5, 4.0811388300841899834, 7.5709470201606315154e-2),
    (5, 7.5909182239565931027, 2.7467390014218296396e-9),
    (5, 8.1622776601683799669, 4.4393219210088521274e-11),
    (17, -1.0830951894845300743e+1, -1.0101560743447721578e-13),
    (17, -8.3398329590308808434, -1.7075024773413071529e-5),
    (17, -3.3575950874020432657, 3.7467469030031387899e-2),
    (17, 1.4080237463298889491e-2, 2.7296622335435495291e-2),
    (17, 5.4154759474226503713, 5.0280996980888381708e-1),
    (17, 1.0072785262206130241e+1, 7.3101813421708422543e-11),
    (17, 1.0830951894845300743e+1, 1.0101560743447721578e-13),
    (40, -1.394427190999915922e+1, 3.2995950439348925699e-16),
    (40, -1.0737089370699353097e+1, 2.0923284919045401045e-4),
    (40, -4.322724292099739074, 2.6724680574864383513e-1),
    (40, 1.812755348299890587e-2, 2.6242478502339415081e-1),
    (40, 6.9721359549995796101, 2.3075136623942679618e-1),
    (40, 1.2968172876299218998e+1, 6.1087476962162718712e-12),
    (40, 1.394427190999915922e+1, 3.2995950439348925699e-16),
    (99, -1.9071247279470288305e+1, -1.4563092851094703059e-19),
    (99, -1.4684860405192122101e+1, -3.9826372671142532085e-2),
    (99, -5.9120866566357896943, -1.5847114528804871413e-1),
    (99, 2.4792621463311372704e-2, -7.2792552624884856561e-2),
    (99, 9.5356236397351441525, 1.9395295787686507406e-1),
    (99, 1.7736259969907369083e+1, 1.1186083011470815483e-12),
    (99, 1.9071247279470288305e+1, 1.4563092851094703059e-19),
    (150, -2.2320508075688774596e+1, 2.1408158316400136233e-21),
    (150, -1.7186791218280355054e+1, 3.7754710940211438593e-1),
    (150, -6.9193575034635195209, 1.7107771655729237965e-1),
    (150, 2.9016660498395404483e-2, -1.6779193192277385344e-1),
    (150, 1.1160254037844387298e+1, 2.1381688399598565085e-1),
    (150, 2.0758072510390558563e+1, 1.0641553275717670951e-12),
    (150, 2.2320508075688774596e+1, 2.1408158316400136233e-21),
    (223, -2.6118712081942874192e+1, -2.4224310462350243595e-23),
    (223, -2.0111408303096016681e+1, 2.63850266083991208e-1),
    (223, -8.0968007454022909997, -7.0269680119783682039e-2),
    (223, 3.395432570652573423e-2, -1.141426305783095521e-1),
    (223, 1.3059356040971437096e+1, 4.5760533770319733698e-2),
    (223, 2.4290402236206876552e+1, 2.0570206359922359906e-12),
    (223, 2.6118712081942874192e+1, 2.4224310462350243595e-23),
    (300, -2.949489742783178059e+1, 6.1772340226686230808e-25),
    (300, -2.271107101943047013e+1, -1.4819787282173233067e-1),
    (300, -9.1434182026278527644, 8.0516546987367773147e-2),
    (300, 3.83433666561813144e-2, 9.5042495964988846987e-2),
    (300, 1.4747448713915890295e+1, 1.0786241245164312347e-1),
    (300, 2.7430254607883558293e+1, 6.1226276228427097309e-12),
    (300, 2.949489742783178059e+1, 6.1772340226686230808e-25),
];
pub const AIRY_KERNEL_00: f64 = 6.6987483779663974144e-2;
