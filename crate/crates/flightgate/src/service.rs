//! The REST service.
//!
//! * `GET /api/questionnaire`: the questions, in display order.
//! * `POST /api/check`: compliance report for a full set of answers.
//! * `POST /api/query`: partial models and justifications for a query.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use flightgate_core::compliance::AnswerProblem;
use flightgate_core::{check_compliance, AnswerSet, KnowledgeBase, Question};
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

use crate::query::{run_query, QueryError};
use crate::schema::{CheckRequest, CheckResponse, ErrorBody, FieldError, Location, QueryRequest};
use crate::SystemClock;

#[derive(Clone)]
struct AppState {
    kb: Arc<KnowledgeBase>,
    clock: SystemClock,
}

pub fn router(kb: Arc<KnowledgeBase>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/questionnaire", get(questionnaire))
        .route("/api/check", post(check))
        .route("/api/query", post(query))
        .layer(cors)
        .with_state(AppState { kb, clock: SystemClock::default() })
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    kb: Arc<KnowledgeBase>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(kb)).with_graceful_shutdown(shutdown).await
}

struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, body: ErrorBody::new(message) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        let status = match rejection {
            JsonRejection::MissingJsonContentType(_) => StatusCode::UNSUPPORTED_MEDIA_TYPE,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        ApiError::new(status, rejection.body_text())
    }
}

async fn questionnaire(State(state): State<AppState>) -> Json<Vec<Question>> {
    Json(state.kb.questionnaire().questions().to_vec())
}

async fn check(
    State(state): State<AppState>,
    body: Result<Json<CheckRequest>, JsonRejection>,
) -> Result<Json<CheckResponse>, ApiError> {
    let Json(request) = body?;
    let answers: AnswerSet = request.answers.into_iter().collect();
    if let Err(issues) = answers.check_total(state.kb.questionnaire()) {
        let fields = issues
            .into_iter()
            .map(|i| FieldError {
                message: match i.problem {
                    AnswerProblem::Missing => "missing answer".into(),
                    AnswerProblem::Unknown => "not a questionnaire condition".into(),
                },
                condition: i.condition,
            })
            .collect();
        return Err(ApiError {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: "answers must cover every questionnaire condition".into(),
                fields,
                location: None,
            },
        });
    }
    let kb = state.kb.clone();
    let clock = state.clock;
    let report = tokio::task::spawn_blocking(move || {
        check_compliance(&answers, &kb, &clock).map(|r| CheckResponse::new(&r, &kb))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
    Ok(Json(report))
}

async fn query(State(state): State<AppState>, body: Result<Json<QueryRequest>, JsonRejection>) -> Response {
    let Json(request) = match body {
        Ok(b) => b,
        Err(e) => return ApiError::from(e).into_response(),
    };
    let kb = state.kb.clone();
    let outcome = tokio::task::spawn_blocking(move || {
        run_query(kb.program(), request.program.as_deref(), &request.query, request.max_models).map(|o| o.to_response())
    })
    .await;
    match outcome {
        Ok(Ok(resp)) => Json(resp).into_response(),
        Ok(Err(e)) => {
            let status = match e {
                QueryError::OddLoops(_) | QueryError::Engine(_) => StatusCode::UNPROCESSABLE_ENTITY,
                _ => StatusCode::BAD_REQUEST,
            };
            let location = e.location().map(|(line, column)| Location { line, column });
            ApiError { status, body: ErrorBody { error: e.to_string(), fields: Vec::new(), location } }.into_response()
        }
        Err(e) => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    }
}
