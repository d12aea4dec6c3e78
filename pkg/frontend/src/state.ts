/** UI state and its pure transition functions.
 *
 * The point list always mirrors the server response from the last mutation;
 * nothing is inferred locally.  Training is a small state machine: idle ->
 * running -> done | failed, with at most one in-flight job.
 */

import type { JobStatus, Role, ServerPoint, SessionInfo } from "./api.js";

export type JobPhase = "idle" | "running" | "done" | "failed";

export interface UiState {
  sessionId: string | null;
  imageWidth: number;
  imageHeight: number;
  hasGold: boolean;
  points: ServerPoint[];
  activeRole: Role;
  classLabel: string;
  overlayOpacity: number;
  threshold: number;
  jobId: string | null;
  jobPhase: JobPhase;
  jobProgress: number;
  jobError: string | null;
  lastBa: number | null;
  maskVersion: number;
  raw: Float64Array | null;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    imageWidth: 0,
    imageHeight: 0,
    hasGold: false,
    points: [],
    activeRole: "prototype",
    classLabel: "object",
    overlayOpacity: 0.5,
    threshold: 0.5,
    jobId: null,
    jobPhase: "idle",
    jobProgress: 0,
    jobError: null,
    lastBa: null,
    maskVersion: 0,
    raw: null,
  };
}

export function sessionCreated(state: UiState, info: SessionInfo): UiState {
  return {
    ...initialState(),
    sessionId: info.id,
    imageWidth: info.width,
    imageHeight: info.height,
    hasGold: info.has_gold,
    activeRole: state.activeRole,
    classLabel: state.classLabel,
    overlayOpacity: state.overlayOpacity,
    threshold: state.threshold,
  };
}

/** Server responses are the source of truth for the point list. */
export function pointsSynced(state: UiState, points: ServerPoint[]): UiState {
  return { ...state, points: [...points] };
}

export function trainRequested(state: UiState, jobId: string): UiState {
  return {
    ...state,
    jobId,
    jobPhase: "running",
    jobProgress: 0,
    jobError: null,
  };
}

export function jobUpdated(state: UiState, doc: JobStatus): UiState {
  if (doc.status === "running") {
    return { ...state, jobPhase: "running", jobProgress: doc.progress };
  }
  if (doc.status === "failed") {
    return {
      ...state,
      jobPhase: "failed",
      jobError: doc.error ?? "training failed",
    };
  }
  return {
    ...state,
    jobPhase: "done",
    jobProgress: 1,
    // displayed BA is the job's value verbatim (null when no gold uploaded)
    lastBa: doc.ba ?? null,
    maskVersion: state.maskVersion + 1,
  };
}

export function rawLoaded(state: UiState, values: number[]): UiState {
  return { ...state, raw: Float64Array.from(values) };
}

/** Train is legal only with a session, >= 1 point, and no running job. */
export function canTrain(state: UiState): boolean {
  return state.sessionId !== null
    && state.points.length > 0
    && state.jobPhase !== "running";
}

/** Validation message shown instead of sending a doomed request. */
export function trainBlockReason(state: UiState): string | null {
  if (state.sessionId === null) return "upload an image first";
  if (state.points.length === 0) return "place at least one prototype point";
  if (state.jobPhase === "running") return "a training job is already running";
  return null;
}

/** Point marker color: prototype cyan, counter-prototype red. */
export function roleColor(role: Role): string {
  return role === "prototype" ? "#00e5ff" : "#ff3b30";
}

export function formatBa(ba: number | null): string {
  return ba === null ? "n/a" : `${(ba * 100).toFixed(2)}%`;
}
