/** Italian stopwords (articles, prepositions, conjunctions, common verbs)
 * used by the topic extractor's frequency filter. */

export const STOPWORDS_IT: ReadonlySet<string> = new Set([
  "a", "ad", "agli", "ai", "al", "alla", "alle", "allo", "anche", "ancora",
  "aveva", "avevano", "avere", "ben", "che", "chi", "ci", "cioè", "come",
  "con", "contro", "cosa", "cui", "da", "dal", "dalla", "dalle", "dallo",
  "degli", "dei", "del", "dell", "della", "delle", "dello", "dentro", "di",
  "dopo", "dove", "due", "e", "ecco", "ed", "era", "erano", "essere", "fa",
  "fare", "fino", "fra", "gli", "ha", "hanno", "ho", "i", "il", "in",
  "invece", "io", "la", "le", "lei", "li", "lo", "loro", "lui", "ma", "me",
  "mentre", "mi", "mia", "mio", "molto", "ne", "negli", "nei", "nel",
  "nella", "nelle", "nello", "no", "noi", "non", "nostro", "o", "ogni",
  "oppure", "ora", "per", "perché", "però", "più", "poco", "poi", "prima",
  "può", "qua", "quale", "quando", "quanto", "quasi", "quella", "quelle",
  "quelli", "quello", "questa", "queste", "questi", "questo", "qui",
  "quindi", "se", "sei", "sempre", "senza", "si", "sia", "siamo", "solo",
  "sono", "sopra", "sotto", "specie", "sta", "stato", "stata", "stesso",
  "su", "sua", "sue", "sugli", "sui", "sul", "sulla", "sulle", "sullo",
  "suo", "suoi", "ti", "tra", "tu", "tua", "tuo", "tutti", "tutto", "un",
  "una", "uno", "va", "vi", "via", "voi",
]);
