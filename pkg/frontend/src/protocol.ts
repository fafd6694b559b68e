// Message shapes for the /session websocket.  The service is the source of
// truth for these; this file only mirrors them.

export type MappingName = 'absolute' | 'relative' | 'rate';

export interface ConfigMsg {
  kind: 'config';
  mapping?: MappingName;
  gain_t?: string;
  gain_r?: string;
  ego_t?: boolean;
  ego_r?: boolean;
  tol?: number;
}

export interface EngageMsg {
  kind: 'engage';
  p: number[];
  q: number[];
}

export interface DisengageMsg {
  kind: 'disengage';
}

export interface PoseMsg {
  kind: 'pose';
  tick: number;
  p: number[];
  q: number[];
  dt: number;
}

export type Outbound = ConfigMsg | EngageMsg | DisengageMsg | PoseMsg;

export interface EngageAck {
  kind: 'ack';
  ack: 'engage';
  p: number[];
  q: number[];
}

export interface ConfigAck {
  kind: 'ack';
  ack: 'config';
  mapping: MappingName;
  gain_t: string;
  gain_r: string;
  ego_t: boolean;
  ego_r: boolean;
  tol: number;
}

export interface PlainAck {
  kind: 'ack';
  ack: 'disengage' | 'pose';
}

export interface ObjectReply {
  kind: 'object';
  tick: number;
  p: number[];
  q: number[];
  k_t: number;
  k_r: number;
  compliant_t: boolean;
  compliant_r: boolean;
}

export interface ErrorReply {
  kind: 'error';
  error: 'parse' | 'config' | 'engine';
  message: string;
}

export type Reply = EngageAck | ConfigAck | PlainAck | ObjectReply | ErrorReply;

export function parseReply(data: string): Reply | null {
  let msg: unknown;
  try {
    msg = JSON.parse(data);
  } catch {
    return null;
  }
  if (typeof msg !== 'object' || msg === null || !('kind' in msg)) return null;
  return msg as Reply;
}
