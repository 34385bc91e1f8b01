// Wire types, mirroring the server's JSON envelope field for field.
// The kiosk displays these values verbatim; it derives nothing itself.

export type Rgb = [number, number, number];

export interface SeriesDoc {
  building_id: string;
  bin_start: number;
  bin_width: number;
  counts: number[];
}

export interface MapPoint {
  building_id: string;
  latitude: number;
  longitude: number;
  base_height: number;
  bounce_amplitude_ratio: number;
  bounce_period: number;
  bounce_phase: number;
  color: Rgb;
  level: string;
  count: number;
}

export interface PeakTableRow {
  time: string;
  count: number;
}

export interface PopupPanel {
  building_id: string;
  name: string;
  icon: string;
  count: number;
  level: string;
  series_24h: SeriesDoc;
  peak_marks: [number, number][];
  peak_table: PeakTableRow[];
  pin: [number, number];
}

export interface ZoneBar {
  zone_id: string;
  name: string;
  total: number;
  bar_color: Rgb;
}

export interface TotalsChart {
  history: SeriesDoc;
  forecast: SeriesDoc;
  boundary_index: number;
}

export interface ChordAnchor {
  from_zone: string;
  to_zone: string;
  count: number;
  highlighted: boolean;
  redundancy_text: string;
}

export interface ChordDiagram {
  zones: { id: string; name: string }[];
  entries: { from_zone: string; to_zone: string; count: number }[];
  anchors: ChordAnchor[];
}

export interface LadderRung {
  building_id: string;
  name: string;
  count: number;
}

export interface PayloadDoc {
  generated_at: number;
  map_points: MapPoint[];
  popup_rotation: PopupPanel[];
  dwell_seconds: number;
  zone_ranking: ZoneBar[];
  totals: TotalsChart;
  chord: ChordDiagram;
  ladder_in: LadderRung[];
  ladder_out: LadderRung[];
}

export interface PayloadEnvelope {
  schema_version: string;
  payload: PayloadDoc;
  virtual_now: number;
}

export type Connection = "connecting" | "live" | "stale";
