/**
 * Object-detection adapter around a pretrained detector.
 *
 * The detector itself is pluggable: anything that maps an image file to
 * labeled boxes with confidences. `loadDetector` wires up a TensorFlow.js
 * graph model when the runtime support is installed and throws
 * ModelUnavailable otherwise, so pipelines degrade cleanly on hosts without
 * the model stack. Video files are sampled one frame per interval and the
 * per-frame labels are unioned keeping each label's best confidence.
 */

import { spawn } from "node:child_process";
import { mkdtemp, readdir, rm, stat } from "node:fs/promises";
import { tmpdir } from "node:os";
import * as path from "node:path";

import { ModelUnavailable, UnreadableMedia } from "./errors.js";
import type { ExtractionConfig, Term } from "./types.js";

export interface Detection {
  label: string;
  confidence: number;
}

export interface DetectionBackend {
  /** Detect objects in one image file. */
  detect(imagePath: string): Promise<Detection[]>;
}

export interface FrameSource {
  /** Yield frame image paths sampled from a video at the given interval. */
  frames(videoPath: string, intervalSeconds: number): AsyncIterable<string>;
  cleanup?(): Promise<void>;
}

const IMAGE_EXTENSIONS = new Set([".jpg", ".jpeg", ".png", ".gif", ".webp", ".bmp"]);
const VIDEO_EXTENSIONS = new Set([".mp4", ".webm", ".mov", ".avi", ".mkv"]);

export function isImagePath(filePath: string): boolean {
  return IMAGE_EXTENSIONS.has(path.extname(filePath).toLowerCase());
}

export function isVideoPath(filePath: string): boolean {
  return VIDEO_EXTENSIONS.has(path.extname(filePath).toLowerCase());
}

/**
 * Load a pretrained TF.js graph model as a detection backend. Requires the
 * optional model runtime (@tensorflow/tfjs-node) plus downloaded weights;
 * when either is missing the adapter reports ModelUnavailable rather than
 * guessing.
 */
export async function loadDetector(modelDir: string): Promise<DetectionBackend> {
  try {
    await stat(path.join(modelDir, "model.json"));
  } catch {
    throw new ModelUnavailable(`no model.json under ${modelDir}`);
  }
  // Dynamic, non-literal specifier: the node bindings are an optional,
  // heavyweight install and must not be a compile-time dependency.
  const runtime = "@tensorflow/tfjs-node";
  let tf: any;
  try {
    tf = await import(runtime);
  } catch {
    throw new ModelUnavailable(
      "@tensorflow/tfjs-node is not installed; install it (and the model weights) to run detection",
    );
  }
  const model = await tf.loadGraphModel(`file://${path.join(modelDir, "model.json")}`);
  const labels = await loadLabels(modelDir);
  return {
    async detect(imagePath: string): Promise<Detection[]> {
      const image = tf.node.decodeImage(await readFileBytes(imagePath), 3);
      try {
        const batched = image.expandDims(0);
        const [boxes, scores, classes] = (await model.executeAsync(batched)) as unknown[];
        void boxes;
        const scoreData = await (scores as { data(): Promise<Float32Array> }).data();
        const classData = await (classes as { data(): Promise<Float32Array> }).data();
        const detections: Detection[] = [];
        for (let i = 0; i < scoreData.length; i++) {
          const label = labels[Math.round(classData[i])];
          if (label) detections.push({ label, confidence: scoreData[i] });
        }
        return detections;
      } finally {
        image.dispose();
      }
    },
  };
}

async function readFileBytes(filePath: string): Promise<Buffer> {
  const { readFile } = await import("node:fs/promises");
  try {
    return await readFile(filePath);
  } catch (error) {
    throw new UnreadableMedia(`cannot read ${filePath}: ${String(error)}`);
  }
}

async function loadLabels(modelDir: string): Promise<string[]> {
  const { readFile } = await import("node:fs/promises");
  try {
    const text = await readFile(path.join(modelDir, "labels.txt"), "utf-8");
    return text.split("\n").map((line) => line.trim());
  } catch {
    throw new ModelUnavailable(`no labels.txt under ${modelDir}`);
  }
}

/** Frame sampler backed by the ffmpeg binary when present on PATH. */
export function ffmpegFrameSource(): FrameSource {
  let workDir: string | undefined;
  return {
    async *frames(videoPath: string, intervalSeconds: number) {
      try {
        await stat(videoPath);
      } catch {
        throw new UnreadableMedia(`cannot read ${videoPath}`);
      }
      workDir = await mkdtemp(path.join(tmpdir(), "frames-"));
      const pattern = path.join(workDir, "frame-%05d.jpg");
      const code = await new Promise<number>((resolve, reject) => {
        const child = spawn(
          "ffmpeg",
          ["-i", videoPath, "-vf", `fps=1/${intervalSeconds}`, "-y", pattern],
          { stdio: "ignore" },
        );
        child.on("error", reject);
        child.on("close", resolve);
      }).catch(() => {
        throw new ModelUnavailable("ffmpeg is required for video frame sampling");
      });
      if (code !== 0) {
        throw new UnreadableMedia(`ffmpeg could not decode ${videoPath}`);
      }
      for (const name of (await readdir(workDir)).sort()) {
        yield path.join(workDir, name);
      }
    },
    async cleanup() {
      if (workDir) await rm(workDir, { recursive: true, force: true });
    },
  };
}

/**
 * Run detection over an image or video and map labels to subject terms.
 * Labels pass through untranslated; mapping detector vocabulary onto the
 * catalog language is the authority snapshot's job downstream.
 */
export async function extractMediaLabels(
  mediaPath: string,
  config: ExtractionConfig,
  backend: DetectionBackend,
  frameSource?: FrameSource,
): Promise<Term[]> {
  const best = new Map<string, number>();

  const collect = (detections: Detection[]) => {
    for (const { label, confidence } of detections) {
      const current = best.get(label);
      if (current === undefined || confidence > current) {
        best.set(label, confidence);
      }
    }
  };

  if (isImagePath(mediaPath)) {
    await stat(mediaPath).catch(() => {
      throw new UnreadableMedia(`cannot read ${mediaPath}`);
    });
    collect(await backend.detect(mediaPath));
  } else if (isVideoPath(mediaPath)) {
    const source = frameSource ?? ffmpegFrameSource();
    try {
      for await (const frame of source.frames(mediaPath, config.frameIntervalSeconds)) {
        collect(await backend.detect(frame));
      }
    } finally {
      await source.cleanup?.();
    }
  } else {
    throw new UnreadableMedia(`unsupported media file: ${mediaPath}`);
  }

  return [...best.entries()]
    .filter(([, confidence]) => confidence >= config.minConfidence)
    .sort(([a], [b]) => a.localeCompare(b))
    .map(([label, confidence]) => ({
      surface: label,
      category: "subject" as const,
      confidence: Math.round(confidence * 1000) / 1000,
      origin: "object_detection" as const,
    }));
}
