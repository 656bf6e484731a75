/**
 * Small Italian-language gazetteer for rule-based place recognition:
 * countries and regions relevant to 20th-century migration history plus
 * major Italian cities. Keys are case-folded surfaces.
 */

const PLACES = [
  "Italia",
  "Svizzera",
  "Germania",
  "Francia",
  "Belgio",
  "Austria",
  "Spagna",
  "Portogallo",
  "Grecia",
  "Jugoslavia",
  "Unione Sovietica",
  "Stati Uniti",
  "Argentina",
  "Brasile",
  "Venezuela",
  "Australia",
  "Canada",
  "Lussemburgo",
  "Paesi Bassi",
  "Olanda",
  "Inghilterra",
  "Regno Unito",
  "Europa",
  "Roma",
  "Milano",
  "Torino",
  "Napoli",
  "Genova",
  "Bologna",
  "Firenze",
  "Palermo",
  "Venezia",
  "Bari",
  "Cagliari",
  "Trieste",
  "Zurigo",
  "Ginevra",
  "Basilea",
  "Berna",
  "Parigi",
  "Marsiglia",
  "Bruxelles",
  "Colonia",
  "Stoccarda",
  "Monaco di Baviera",
  "Francoforte",
  "Sicilia",
  "Sardegna",
  "Calabria",
  "Campania",
  "Puglia",
  "Veneto",
  "Lombardia",
  "Piemonte",
  "Mezzogiorno",
] as const;

/** Case-folded surface -> canonical spelling. */
export const GAZETTEER: ReadonlyMap<string, string> = new Map(
  PLACES.map((place) => [place.toLowerCase(), place]),
);

/** Longest gazetteer entry, in tokens (bounds the n-gram scan). */
export const MAX_PLACE_TOKENS = Math.max(
  ...PLACES.map((place) => place.split(" ").length),
);
